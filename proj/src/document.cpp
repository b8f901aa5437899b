#include "tropcert/document.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace tropcert {

using nlohmann::json;

DocumentError::DocumentError(Kind kind, std::string path, const std::string &message, size_t line, size_t column)
    : std::runtime_error(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                    message
                              : (path.empty() ? message : path + ": " + message)),
      kind_(kind), path_(std::move(path)), line_(line), column_(column) {}

namespace {

using Kind = DocumentError::Kind;

const std::vector<std::string> tables = {"charts", "complexes", "cycles", "forms",
                                         "functions", "lattices", "maps", "regions"};

// Linear expressions c0 + Σ c_i name_i.
struct Linear {
  Rational constant;
  std::map<std::string, Rational> coeffs;
};

Linear parse_linear(const std::string &text) {
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  auto fail = [&](const std::string &what) -> Linear {
    throw std::invalid_argument("malformed expression '" + text + "': " + what);
  };
  auto number = [&]() -> std::optional<Rational> {
    size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      ++i;
    if (i == start)
      return std::nullopt;
    if (i < text.size() && text[i] == '/') {
      ++i;
      size_t den = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        ++i;
      if (i == den)
        fail("missing denominator");
    }
    return parse_rational(text.substr(start, i - start));
  };
  auto name = [&]() -> std::optional<std::string> {
    if (i >= text.size() || !(std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      return std::nullopt;
    size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      ++i;
    return text.substr(start, i - start);
  };
  Linear out;
  skip();
  if (i == text.size())
    return fail("empty");
  bool first = true;
  while (true) {
    skip();
    if (i == text.size())
      break;
    Rational sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      return fail("expected '+' or '-' at position " + std::to_string(i));
    }
    first = false;
    Rational coef = 1;
    bool have_number = false;
    if (auto n = number()) {
      coef = *n;
      have_number = true;
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip();
        auto v = name();
        if (!v)
          return fail("expected a parameter name after '*'");
        out.coeffs[*v] += sign * coef;
        continue;
      }
    }
    if (have_number) {
      out.constant += sign * coef;
      continue;
    }
    auto v = name();
    if (!v)
      return fail("unexpected character at position " + std::to_string(i));
    out.coeffs[*v] += sign;
  }
  std::erase_if(out.coeffs, [](const auto &kv) { return kv.second == 0; });
  return out;
}

std::string format_linear(const Linear &l) {
  std::string out;
  auto append = [&](const Rational &c, const std::string &name) {
    std::string term;
    if (name.empty())
      term = to_string(abs(c));
    else
      term = (abs(c) == 1 ? "" : to_string(abs(c)) + "*") + name;
    out += (c < 0 ? "-" : (out.empty() ? "" : "+")) + term;
  };
  for (const auto &[name, c] : l.coeffs)
    append(c, name);
  if (l.constant != 0 || out.empty())
    append(l.constant, "");
  return out;
}

// Schema helpers; every failure names the JSON path.
[[noreturn]] void schema_error(const std::string &path, const std::string &msg) {
  throw DocumentError(Kind::Schema, path, msg);
}

void allow_keys(const json &j, const std::string &path, const std::set<std::string> &keys) {
  if (!j.is_object())
    schema_error(path, "expected an object");
  for (const auto &[k, v] : j.items())
    if (!keys.count(k))
      schema_error(path, "unknown field '" + k + "'");
}

const json &field(const json &j, const std::string &path, const std::string &key) {
  auto it = j.find(key);
  if (it == j.end())
    schema_error(path, "missing field '" + key + "'");
  return *it;
}

std::string sub(const std::string &path, const std::string &key) { return path + "." + key; }
std::string sub(const std::string &path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

size_t as_size(const json &j, const std::string &path) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    schema_error(path, "expected a non-negative integer");
  return j.get<size_t>();
}

BigInt as_bigint(const json &j, const std::string &path) {
  if (j.is_number_integer())
    return BigInt(j.get<long long>());
  if (j.is_string()) {
    try {
      Rational q = parse_rational(j.get<std::string>());
      if (is_integer(q))
        return numerator(q);
    } catch (const std::invalid_argument &) {
    }
  }
  schema_error(path, "expected an integer");
}

const json &as_array(const json &j, const std::string &path) {
  if (!j.is_array())
    schema_error(path, "expected an array");
  return j;
}

// Canonicalization: expressions become canonical strings.
json canon_expr(const json &j, const std::string &path) {
  std::string text;
  if (j.is_number_integer())
    text = std::to_string(j.get<long long>());
  else if (j.is_string())
    text = j.get<std::string>();
  else
    schema_error(path, "expected a rational string or expression");
  try {
    return canonical_expression(text);
  } catch (const std::invalid_argument &e) {
    schema_error(path, std::string("invalid rational: ") + e.what());
  }
}

json canon_vector(const json &j, const std::string &path) {
  json out = json::array();
  size_t i = 0;
  for (const auto &x : as_array(j, path))
    out.push_back(canon_expr(x, sub(path, i++)));
  return out;
}

json canon_int_matrix(const json &j, const std::string &path) {
  json out = json::array();
  size_t i = 0;
  for (const auto &row : as_array(j, path)) {
    json r = json::array();
    size_t k = 0;
    for (const auto &x : as_array(row, sub(path, i)))
      r.push_back(json(to_string(as_bigint(x, sub(sub(path, i), k++)))));
    out.push_back(std::move(r));
    ++i;
  }
  return out;
}

const std::set<std::string> relations = {">=", ">", "=", "<=", "<"};

json canon_constraint(const json &j, const std::string &path) {
  allow_keys(j, path, {"a", "rel", "b"});
  const auto &rel = field(j, path, "rel");
  if (!rel.is_string() || !relations.count(rel.get<std::string>()))
    schema_error(sub(path, "rel"), "expected one of >=, >, =, <=, <");
  return {{"a", canon_vector(field(j, path, "a"), sub(path, "a"))},
          {"rel", rel},
          {"b", canon_expr(field(j, path, "b"), sub(path, "b"))}};
}

json canon_poly(const json &j, const std::string &path) {
  allow_keys(j, path, {"constraints", "point", "ray", "segment", "cone", "space"});
  if (j.size() != 1)
    schema_error(path, "a cell has exactly one of constraints, point, ray, segment, cone, space");
  const auto &[key, v] = *j.items().begin();
  json out;
  if (key == "constraints") {
    json cs = json::array();
    size_t i = 0;
    for (const auto &c : as_array(v, sub(path, key)))
      cs.push_back(canon_constraint(c, sub(sub(path, key), i++)));
    out[key] = cs;
  } else if (key == "point") {
    out[key] = canon_vector(v, sub(path, key));
  } else if (key == "ray") {
    allow_keys(v, sub(path, key), {"apex", "direction"});
    out[key] = {{"apex", canon_vector(field(v, sub(path, key), "apex"), sub(sub(path, key), "apex"))},
                {"direction",
                 canon_vector(field(v, sub(path, key), "direction"), sub(sub(path, key), "direction"))}};
  } else if (key == "segment") {
    if (!v.is_array() || v.size() != 2)
      schema_error(sub(path, key), "expected two endpoints");
    out[key] = json::array({canon_vector(v[0], sub(sub(path, key), 0)), canon_vector(v[1], sub(sub(path, key), 1))});
  } else if (key == "cone") {
    allow_keys(v, sub(path, key), {"apex", "generators"});
    json gens = json::array();
    size_t i = 0;
    for (const auto &g : as_array(field(v, sub(path, key), "generators"), sub(sub(path, key), "generators")))
      gens.push_back(canon_vector(g, sub(sub(sub(path, key), "generators"), i++)));
    out[key] = {{"apex", canon_vector(field(v, sub(path, key), "apex"), sub(sub(path, key), "apex"))},
                {"generators", gens}};
  } else {
    if (!v.is_boolean() || !v.get<bool>())
      schema_error(sub(path, key), "expected true");
    out[key] = true;
  }
  return out;
}

json canon_affine(const json &j, const std::string &path) {
  allow_keys(j, path, {"linear", "constant"});
  return {{"linear", canon_vector(field(j, path, "linear"), sub(path, "linear"))},
          {"constant", j.contains("constant") ? canon_expr(j["constant"], sub(path, "constant")) : json("0")}};
}

json canon_index_set(const json &j, const std::string &path) {
  json out = json::array();
  long long prev = 0;
  size_t i = 0;
  for (const auto &x : as_array(j, path)) {
    if (!x.is_number_integer() || x.get<long long>() < 1)
      schema_error(sub(path, i), "expected a positive index");
    if (x.get<long long>() <= prev)
      schema_error(path, "indices must be strictly increasing");
    prev = x.get<long long>();
    out.push_back(prev);
    ++i;
  }
  return out;
}

json canon_strings(const json &j, const std::string &path) {
  if (!j.is_object())
    schema_error(path, "expected an object of strings");
  for (const auto &[k, v] : j.items())
    if (!v.is_string())
      schema_error(sub(path, k), "expected a string");
  return j;
}

json canon_object(const std::string &table, const json &j, const std::string &path) {
  if (table == "lattices") {
    allow_keys(j, path, {"ambient_rank", "generators"});
    return {{"ambient_rank", as_size(field(j, path, "ambient_rank"), sub(path, "ambient_rank"))},
            {"generators", canon_int_matrix(field(j, path, "generators"), sub(path, "generators"))}};
  }
  if (table == "complexes") {
    allow_keys(j, path, {"ambient_rank", "cells"});
    json cells = json::array();
    size_t i = 0;
    for (const auto &c : as_array(field(j, path, "cells"), sub(path, "cells")))
      cells.push_back(canon_poly(c, sub(sub(path, "cells"), i++)));
    return {{"ambient_rank", as_size(field(j, path, "ambient_rank"), sub(path, "ambient_rank"))}, {"cells", cells}};
  }
  if (table == "cycles") {
    allow_keys(j, path, {"ambient_rank", "dim", "cells", "complex", "weights", "balanced"});
    json out;
    out["dim"] = as_size(field(j, path, "dim"), sub(path, "dim"));
    out["balanced"] = true;
    if (j.contains("balanced")) {
      if (!j["balanced"].is_boolean())
        schema_error(sub(path, "balanced"), "expected a boolean");
      out["balanced"] = j["balanced"];
    }
    if (j.contains("complex")) {
      if (j.contains("cells") || j.contains("ambient_rank"))
        schema_error(path, "a cycle uses either 'complex' and 'weights' or 'ambient_rank' and 'cells'");
      if (!j["complex"].is_string())
        schema_error(sub(path, "complex"), "expected a name");
      out["complex"] = j["complex"];
      out["weights"] = canon_vector(field(j, path, "weights"), sub(path, "weights"));
      return out;
    }
    if (j.contains("weights"))
      schema_error(sub(path, "weights"), "weights need a 'complex'");
    out["ambient_rank"] = as_size(field(j, path, "ambient_rank"), sub(path, "ambient_rank"));
    json cells = json::array();
    size_t i = 0;
    for (const auto &c : as_array(field(j, path, "cells"), sub(path, "cells"))) {
      auto p = sub(sub(path, "cells"), i++);
      allow_keys(c, p, {"cell", "weight"});
      cells.push_back({{"cell", canon_poly(field(c, p, "cell"), sub(p, "cell"))},
                       {"weight", canon_expr(field(c, p, "weight"), sub(p, "weight"))}});
    }
    out["cells"] = cells;
    return out;
  }
  if (table == "functions") {
    allow_keys(j, path, {"cycle", "ambient_rank", "pieces", "max", "affine", "restrict", "scale"});
    json out;
    if (j.contains("cycle") == j.contains("ambient_rank"))
      schema_error(path, "a function has exactly one of 'cycle' and 'ambient_rank'");
    if (j.contains("cycle")) {
      if (!j["cycle"].is_string())
        schema_error(sub(path, "cycle"), "expected a name");
      out["cycle"] = j["cycle"];
    } else {
      out["ambient_rank"] = as_size(j["ambient_rank"], sub(path, "ambient_rank"));
    }
    int kinds = j.contains("pieces") + j.contains("max") + j.contains("affine") + j.contains("restrict");
    if (kinds != 1)
      schema_error(path, "a function has exactly one of pieces, max, affine, restrict");
    if (j.contains("pieces")) {
      json pieces = json::array();
      size_t i = 0;
      for (const auto &c : as_array(j["pieces"], sub(path, "pieces"))) {
        auto p = sub(sub(path, "pieces"), i++);
        allow_keys(c, p, {"cell", "linear", "constant"});
        json piece = canon_affine(json{{"linear", field(c, p, "linear")},
                                       {"constant", c.contains("constant") ? c["constant"] : json("0")}},
                                  p);
        piece["cell"] = canon_poly(field(c, p, "cell"), sub(p, "cell"));
        pieces.push_back(piece);
      }
      out["pieces"] = pieces;
    } else if (j.contains("max")) {
      json terms = json::array();
      size_t i = 0;
      for (const auto &t : as_array(j["max"], sub(path, "max")))
        terms.push_back(canon_affine(t, sub(sub(path, "max"), i++)));
      out["max"] = terms;
    } else if (j.contains("affine")) {
      out["affine"] = canon_affine(j["affine"], sub(path, "affine"));
    } else {
      if (!j["restrict"].is_string())
        schema_error(sub(path, "restrict"), "expected a name");
      out["restrict"] = j["restrict"];
    }
    if (j.contains("scale"))
      out["scale"] = canon_expr(j["scale"], sub(path, "scale"));
    return out;
  }
  if (table == "regions") {
    allow_keys(j, path, {"ambient_rank", "everything", "box", "clauses"});
    json out;
    out["ambient_rank"] = as_size(field(j, path, "ambient_rank"), sub(path, "ambient_rank"));
    int kinds = j.contains("everything") + j.contains("box") + j.contains("clauses");
    if (kinds != 1)
      schema_error(path, "a region has exactly one of everything, box, clauses");
    if (j.contains("everything")) {
      if (!j["everything"].is_boolean() || !j["everything"].get<bool>())
        schema_error(sub(path, "everything"), "expected true");
      out["everything"] = true;
    } else if (j.contains("box")) {
      allow_keys(j["box"], sub(path, "box"), {"lo", "hi"});
      out["box"] = {{"lo", canon_vector(field(j["box"], sub(path, "box"), "lo"), sub(sub(path, "box"), "lo"))},
                    {"hi", canon_vector(field(j["box"], sub(path, "box"), "hi"), sub(sub(path, "box"), "hi"))}};
    } else {
      json clauses = json::array();
      size_t i = 0;
      for (const auto &cl : as_array(j["clauses"], sub(path, "clauses"))) {
        auto p = sub(sub(path, "clauses"), i++);
        json cs = json::array();
        size_t k = 0;
        for (const auto &c : as_array(cl, p))
          cs.push_back(canon_constraint(c, sub(p, k++)));
        clauses.push_back(cs);
      }
      out["clauses"] = clauses;
    }
    return out;
  }
  if (table == "maps") {
    allow_keys(j, path, {"matrix", "translation", "source_rank"});
    json out;
    out["matrix"] = canon_int_matrix(field(j, path, "matrix"), sub(path, "matrix"));
    if (j.contains("translation"))
      out["translation"] = canon_vector(j["translation"], sub(path, "translation"));
    if (j.contains("source_rank"))
      out["source_rank"] = as_size(j["source_rank"], sub(path, "source_rank"));
    return out;
  }
  if (table == "forms") {
    allow_keys(j, path, {"rank", "p", "q", "terms"});
    json terms = json::array();
    size_t i = 0;
    for (const auto &t : as_array(field(j, path, "terms"), sub(path, "terms"))) {
      auto p = sub(sub(path, "terms"), i++);
      allow_keys(t, p, {"I", "J", "c"});
      terms.push_back({{"I", canon_index_set(field(t, p, "I"), sub(p, "I"))},
                       {"J", canon_index_set(field(t, p, "J"), sub(p, "J"))},
                       {"c", canon_expr(field(t, p, "c"), sub(p, "c"))}});
    }
    return {{"rank", as_size(field(j, path, "rank"), sub(path, "rank"))},
            {"p", as_size(field(j, path, "p"), sub(path, "p"))},
            {"q", as_size(field(j, path, "q"), sub(path, "q"))},
            {"terms", terms}};
  }
  // charts
  allow_keys(j, path, {"function", "region", "extension", "metadata"});
  json out;
  for (const char *k : {"function", "region", "extension"})
    if (j.contains(k)) {
      if (!j[k].is_string())
        schema_error(sub(path, k), "expected a name");
      out[k] = j[k];
    }
  field(j, path, "function");
  if (j.contains("metadata"))
    out["metadata"] = canon_strings(j["metadata"], sub(path, "metadata"));
  return out;
}

// Builders over the canonical tree.
struct Builder {
  const json &tree;
  Parameters params;
  int depth = 0;

  Rational expr(const json &j, const std::string &path) const {
    try {
      return evaluate_expression(j.get<std::string>(), params);
    } catch (const std::invalid_argument &e) {
      throw DocumentError(Kind::Reference, path, e.what());
    }
  }

  RatVector vec(const json &j, const std::string &path, std::optional<size_t> len = std::nullopt) const {
    RatVector out;
    size_t i = 0;
    for (const auto &x : j)
      out.push_back(expr(x, sub(path, i++)));
    if (len && out.size() != *len)
      schema_error(path, "expected length " + std::to_string(*len) + ", got " + std::to_string(out.size()));
    return out;
  }

  const json &entry(const std::string &table, const std::string &name, const std::string &path) const {
    auto t = tree.find(table);
    if (t == tree.end() || !t->contains(name)) {
      for (const auto &other : tables)
        if (tree.contains(other) && tree[other].contains(name))
          throw DocumentError(Kind::Reference, path,
                              "'" + name + "' is in " + other + ", expected an entry of " + table);
      throw DocumentError(Kind::Reference, path, "no entry '" + name + "' in " + table);
    }
    return (*t)[name];
  }

  Constraint constraint(const json &j, size_t r, const std::string &path) const {
    auto a = vec(j["a"], sub(path, "a"), r);
    auto b = expr(j["b"], sub(path, "b"));
    auto rel = j["rel"].get<std::string>();
    if (rel == ">=")
      return greater_equal(a, b);
    if (rel == ">")
      return greater(a, b);
    if (rel == "=")
      return equal(a, b);
    if (rel == "<=")
      return less_equal(a, b);
    return less(a, b);
  }

  template <class F> auto invariant(const std::string &path, F &&f) const {
    try {
      return f();
    } catch (const std::invalid_argument &e) {
      throw DocumentError(Kind::Invariant, path, e.what());
    } catch (const std::out_of_range &e) {
      throw DocumentError(Kind::Invariant, path, e.what());
    }
  }

  // Equalities n·x = n·p for n ⊥ span(dirs).
  static void affine_hull(std::vector<Constraint> &cs, const RatMatrix &dirs, const RatVector &p) {
    RatMatrix rows = dirs;
    if (rows.empty()) {
      for (size_t i = 0; i < p.size(); ++i) {
        RatVector e(p.size());
        e[i] = 1;
        cs.push_back(equal(e, p[i]));
      }
      return;
    }
    for (const auto &n : null_space(rows, p.size()))
      cs.push_back(equal(n, dot(n, p)));
  }

  Polyhedron poly(const json &j, size_t r, const std::string &path) const {
    const auto &[key, v] = *j.items().begin();
    auto p = sub(path, key);
    return invariant(path, [&] {
      std::vector<Constraint> cs;
      if (key == "constraints") {
        size_t i = 0;
        for (const auto &c : v)
          cs.push_back(constraint(c, r, sub(p, i++)));
        return Polyhedron::make(r, cs);
      }
      if (key == "point")
        return Polyhedron::point(vec(v, p, r));
      if (key == "space")
        return Polyhedron::whole_space(r);
      if (key == "ray") {
        auto apex = vec(v["apex"], sub(p, "apex"), r), d = vec(v["direction"], sub(p, "direction"), r);
        if (is_zero(d))
          schema_error(sub(p, "direction"), "direction must be nonzero");
        affine_hull(cs, {d}, apex);
        cs.push_back(greater_equal(d, dot(d, apex)));
        return Polyhedron::make(r, cs);
      }
      if (key == "segment") {
        auto a = vec(v[0], sub(p, 0), r), b = vec(v[1], sub(p, 1), r);
        if (a == b)
          return Polyhedron::point(a);
        auto d = b - a;
        affine_hull(cs, {d}, a);
        cs.push_back(greater_equal(d, dot(d, a)));
        cs.push_back(less_equal(d, dot(d, b)));
        return Polyhedron::make(r, cs);
      }
      // simplicial cone apex + Σ λ_i g_i, λ ≥ 0
      auto apex = vec(v["apex"], sub(p, "apex"), r);
      RatMatrix gens;
      size_t i = 0;
      for (const auto &g : v["generators"])
        gens.push_back(vec(g, sub(sub(p, "generators"), i++), r));
      if (rank(gens, r) != gens.size())
        schema_error(sub(p, "generators"), "cone generators must be linearly independent");
      affine_hull(cs, gens, apex);
      const size_t k = gens.size();
      for (size_t a = 0; a < k; ++a) {
        // f in span(gens) with f·g_b = δ_ab
        RatMatrix gram(k, RatVector(k + 1));
        for (size_t x = 0; x < k; ++x) {
          for (size_t y = 0; y < k; ++y)
            gram[x][y] = dot(gens[x], gens[y]);
          gram[x][k] = x == a ? 1 : 0;
        }
        auto ech = rref(gram, k + 1);
        RatVector f(r);
        for (size_t row = 0; row < ech.rows.size(); ++row)
          f = f + ech.rows[row][k] * gens[ech.pivots[row]];
        cs.push_back(greater_equal(f, dot(f, apex)));
      }
      return Polyhedron::make(r, cs);
    });
  }

  PolyComplex complex(const std::string &name, const std::string &path) const {
    const auto &j = entry("complexes", name, path);
    size_t r = j["ambient_rank"].get<size_t>();
    std::vector<Polyhedron> cells;
    size_t i = 0;
    for (const auto &c : j["cells"])
      cells.push_back(poly(c, r, "complexes." + name + ".cells[" + std::to_string(i++) + "]"));
    return invariant("complexes." + name, [&] {
      auto out = PolyComplex::from_cells(r, cells);
      out.validate();
      return out;
    });
  }

  TropicalCycle cycle(const std::string &name, const std::string &path) const {
    const auto &j = entry("cycles", name, path);
    const std::string base = "cycles." + name;
    size_t dim = j["dim"].get<size_t>();
    std::vector<std::pair<Polyhedron, Rational>> cells;
    size_t r;
    if (j.contains("complex")) {
      auto cplx_name = j["complex"].get<std::string>();
      const auto &cj = entry("complexes", cplx_name, sub(base, "complex"));
      r = cj["ambient_rank"].get<size_t>();
      auto ws = vec(j["weights"], sub(base, "weights"), cj["cells"].size());
      for (size_t i = 0; i < ws.size(); ++i)
        if (ws[i] != 0)
          cells.emplace_back(poly(cj["cells"][i], r, "complexes." + cplx_name + ".cells[" + std::to_string(i) + "]"),
                             ws[i]);
    } else {
      r = j["ambient_rank"].get<size_t>();
      size_t i = 0;
      for (const auto &c : j["cells"]) {
        auto p = sub(sub(base, "cells"), i++);
        cells.emplace_back(poly(c["cell"], r, sub(p, "cell")), expr(c["weight"], sub(p, "weight")));
      }
    }
    if (dim > r)
      schema_error(sub(base, "dim"), "dimension exceeds the ambient rank");
    bool balanced = j["balanced"].get<bool>();
    return invariant(base, [&] { return assemble_checked(r, dim, cells, balanced); });
  }

  static TropicalCycle assemble_checked(size_t r, size_t dim, const std::vector<std::pair<Polyhedron, Rational>> &cells,
                                        bool balanced) {
    auto c = TropicalCycle::from_cells(r, dim, cells, false);
    if (balanced) {
      auto rep = balance_report(c);
      if (!rep.balanced)
        throw std::invalid_argument("declared balanced but unbalanced at the codimension-1 cell through " +
                                    to_string(c.complex().cell(rep.cell).interior_point()) + " (defect " +
                                    to_string(rep.defect) + ")");
    }
    return c;
  }

  AffinePiece affine(const json &j, size_t r, const std::string &path) const {
    return {vec(j["linear"], sub(path, "linear"), r), expr(j["constant"], sub(path, "constant"))};
  }

  PLFunction function(const std::string &name, const std::string &path) {
    if (++depth > 16)
      throw DocumentError(Kind::Reference, path, "function references are circular");
    const auto &j = entry("functions", name, path);
    const std::string base_path = "functions." + name;
    TropicalCycle base = j.contains("cycle") ? cycle(j["cycle"].get<std::string>(), sub(base_path, "cycle"))
                                             : TropicalCycle::ambient(j["ambient_rank"].get<size_t>());
    const size_t r = base.ambient_rank();
    auto f = [&]() -> PLFunction {
      if (j.contains("pieces")) {
        std::vector<std::pair<Polyhedron, AffinePiece>> pieces;
        size_t i = 0;
        for (const auto &pc : j["pieces"]) {
          auto p = sub(sub(base_path, "pieces"), i++);
          pieces.emplace_back(poly(pc["cell"], r, sub(p, "cell")), affine(pc, r, p));
        }
        return invariant(base_path, [&] { return PLFunction::from_pieces(base, pieces); });
      }
      if (j.contains("max")) {
        std::vector<AffinePiece> terms;
        size_t i = 0;
        for (const auto &t : j["max"])
          terms.push_back(affine(t, r, sub(sub(base_path, "max"), i++)));
        return invariant(base_path, [&] { return PLFunction::max_of(base, terms); });
      }
      if (j.contains("affine"))
        return invariant(base_path,
                         [&] { return PLFunction::affine(base, affine(j["affine"], r, sub(base_path, "affine"))); });
      auto ambient = function(j["restrict"].get<std::string>(), sub(base_path, "restrict"));
      return invariant(base_path, [&] {
        if (ambient.ambient_rank() != r || !same_cycle(ambient.base(), TropicalCycle::ambient(r)))
          throw std::invalid_argument("'restrict' needs a function on all of R^" + std::to_string(r));
        return PLFunction::restrict_to(ambient, base);
      });
    }();
    --depth;
    if (j.contains("scale"))
      f = scale(f, expr(j["scale"], sub(base_path, "scale")));
    return f;
  }

  OpenRegion region(const std::string &name, const std::string &path) const {
    const auto &j = entry("regions", name, path);
    const std::string base = "regions." + name;
    size_t r = j["ambient_rank"].get<size_t>();
    if (j.contains("everything"))
      return OpenRegion::everything(r);
    if (j.contains("box")) {
      auto lo = vec(j["box"]["lo"], sub(sub(base, "box"), "lo"), r);
      auto hi = vec(j["box"]["hi"], sub(sub(base, "box"), "hi"), r);
      return OpenRegion::open_box(lo, hi);
    }
    OpenRegion out{r, {}};
    size_t i = 0;
    for (const auto &cl : j["clauses"]) {
      auto p = sub(sub(base, "clauses"), i++);
      std::vector<Constraint> cs;
      size_t k = 0;
      for (const auto &c : cl)
        cs.push_back(constraint(c, r, sub(p, k++)));
      out.clauses.push_back(std::move(cs));
    }
    return out;
  }

  AffineMap map(const std::string &name, const std::string &path) const {
    const auto &j = entry("maps", name, path);
    const std::string base = "maps." + name;
    std::vector<IntVector> rows;
    for (const auto &row : j["matrix"]) {
      IntVector v;
      for (const auto &x : row)
        v.emplace_back(x.get<std::string>());
      rows.push_back(std::move(v));
    }
    size_t cols = rows.empty() ? 0 : rows[0].size();
    if (j.contains("source_rank"))
      cols = j["source_rank"].get<size_t>();
    for (size_t i = 0; i < rows.size(); ++i)
      if (rows[i].size() != cols)
        schema_error(sub(sub(base, "matrix"), i), "expected " + std::to_string(cols) + " columns");
    AffineMap out{IntegerMatrix::from_rows(rows, cols), RatVector(rows.size())};
    if (j.contains("translation"))
      out.translation = vec(j["translation"], sub(base, "translation"), rows.size());
    return out;
  }

  SuperformPoint form(const std::string &name, const std::string &path) const {
    const auto &j = entry("forms", name, path);
    const std::string base = "forms." + name;
    size_t r = j["rank"].get<size_t>();
    return invariant(base, [&] {
      SuperformPoint out(r, j["p"].get<size_t>(), j["q"].get<size_t>());
      size_t i = 0;
      for (const auto &t : j["terms"]) {
        auto p = sub(sub(base, "terms"), i++);
        auto idx = [&](const json &s) {
          IndexSet out;
          for (const auto &x : s)
            out.push_back(x.get<size_t>() - 1);
          return out;
        };
        out.add(idx(t["I"]), idx(t["J"]), expr(t["c"], sub(p, "c")));
      }
      return out;
    });
  }

  TropicalChart chart(const std::string &name, const std::string &path) {
    const auto &j = entry("charts", name, path);
    const std::string base = "charts." + name;
    auto phi = function(j["function"].get<std::string>(), sub(base, "function"));
    auto omega = j.contains("region") ? region(j["region"].get<std::string>(), sub(base, "region"))
                                      : OpenRegion::everything(phi.ambient_rank());
    std::optional<PLFunction> ext;
    if (j.contains("extension"))
      ext = function(j["extension"].get<std::string>(), sub(base, "extension"));
    std::map<std::string, std::string> meta;
    if (j.contains("metadata"))
      for (const auto &[k, v] : j["metadata"].items())
        meta[k] = v.get<std::string>();
    return invariant(base, [&] { return TropicalChart::make(phi, omega, ext, meta); });
  }

  Sublattice lattice(const std::string &name, const std::string &path) const {
    const auto &j = entry("lattices", name, path);
    size_t r = j["ambient_rank"].get<size_t>();
    std::vector<IntVector> gens;
    for (const auto &row : j["generators"]) {
      IntVector v;
      for (const auto &x : row)
        v.emplace_back(x.get<std::string>());
      gens.push_back(std::move(v));
    }
    return invariant("lattices." + name, [&] { return hermite_basis(gens, r); });
  }
};

Parameters merged(const Document &doc, const Parameters &params) {
  auto out = doc.parameters();
  for (const auto &[k, v] : params)
    out[k] = v;
  return out;
}

std::pair<size_t, size_t> line_column(const std::string &text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

} // namespace

std::string canonical_expression(const std::string &text) { return format_linear(parse_linear(text)); }

Rational evaluate_expression(const std::string &text, const Parameters &params) {
  auto l = parse_linear(text);
  Rational out = l.constant;
  for (const auto &[name, c] : l.coeffs) {
    auto it = params.find(name);
    if (it == params.end())
      throw std::invalid_argument("undefined parameter '" + name + "'");
    out += c * it->second;
  }
  return out;
}

Parameters Document::parameters() const {
  Parameters out;
  if (tree_.contains("parameters"))
    for (const auto &[k, v] : tree_["parameters"].items())
      out[k] = parse_rational(v.get<std::string>());
  return out;
}

std::vector<std::string> Document::names(const std::string &table) const {
  std::vector<std::string> out;
  if (tree_.contains(table))
    for (const auto &[k, v] : tree_[table].items())
      out.push_back(k);
  return out;
}

std::string Document::kind_of(const std::string &name) const {
  for (const auto &t : tables)
    if (tree_.contains(t) && tree_[t].contains(name))
      return t;
  return "";
}

TropicalCycle Document::cycle(const std::string &name, const Parameters &params) const {
  return Builder{tree_, merged(*this, params)}.cycle(name, "cycle '" + name + "'");
}
PLFunction Document::function(const std::string &name, const Parameters &params) const {
  Builder b{tree_, merged(*this, params)};
  return b.function(name, "function '" + name + "'");
}
OpenRegion Document::region(const std::string &name, const Parameters &params) const {
  return Builder{tree_, merged(*this, params)}.region(name, "region '" + name + "'");
}
AffineMap Document::map(const std::string &name, const Parameters &params) const {
  return Builder{tree_, merged(*this, params)}.map(name, "map '" + name + "'");
}
SuperformPoint Document::form(const std::string &name, const Parameters &params) const {
  return Builder{tree_, merged(*this, params)}.form(name, "form '" + name + "'");
}
TropicalChart Document::chart(const std::string &name, const Parameters &params) const {
  Builder b{tree_, merged(*this, params)};
  return b.chart(name, "chart '" + name + "'");
}
PolyComplex Document::complex(const std::string &name, const Parameters &params) const {
  return Builder{tree_, merged(*this, params)}.complex(name, "complex '" + name + "'");
}
Sublattice Document::lattice(const std::string &name) const {
  return Builder{tree_, {}}.lattice(name, "lattice '" + name + "'");
}

Document parse_document(const std::string &text) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::parse_error &e) {
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    auto pos = msg.find("syntax error");
    throw DocumentError(Kind::Syntax, "", pos == std::string::npos ? msg : msg.substr(pos), line, col);
  }
  std::set<std::string> top = {"version", "metadata", "parameters"};
  top.insert(tables.begin(), tables.end());
  allow_keys(raw, "document", top);
  const auto &version = field(raw, "document", "version");
  if (!version.is_string() || version.get<std::string>() != Document::version)
    schema_error("version", "unsupported version, expected \"" + std::string(Document::version) + "\"");
  Document doc;
  doc.tree_ = json::object();
  doc.tree_["version"] = version;
  if (raw.contains("metadata"))
    doc.tree_["metadata"] = canon_strings(raw["metadata"], "metadata");
  if (raw.contains("parameters")) {
    json params = json::object();
    if (!raw["parameters"].is_object())
      schema_error("parameters", "expected an object");
    for (const auto &[k, v] : raw["parameters"].items()) {
      auto c = canon_expr(v, "parameters." + k);
      try {
        parse_rational(c.get<std::string>());
      } catch (const std::invalid_argument &) {
        schema_error("parameters." + k, "parameter defaults must be rationals");
      }
      if (canonical_expression(k) != k)
        schema_error("parameters." + k, "invalid parameter name");
      params[k] = c;
    }
    doc.tree_["parameters"] = params;
  }
  std::map<std::string, std::string> seen;
  for (const auto &t : tables) {
    if (!raw.contains(t))
      continue;
    if (!raw[t].is_object())
      schema_error(t, "expected an object of named entries");
    json out = json::object();
    for (const auto &[name, v] : raw[t].items()) {
      if (name.empty())
        schema_error(t, "empty name");
      if (auto [it, fresh] = seen.emplace(name, t); !fresh)
        schema_error(t + "." + name, "name already used in " + it->second);
      out[name] = canon_object(t, v, t + "." + name);
    }
    doc.tree_[t] = out;
  }
  // Validate every object under the default parameters.
  for (const auto &name : doc.names("lattices"))
    doc.lattice(name);
  for (const auto &name : doc.names("complexes"))
    doc.complex(name);
  for (const auto &name : doc.names("cycles"))
    doc.cycle(name);
  for (const auto &name : doc.names("functions"))
    doc.function(name);
  for (const auto &name : doc.names("regions"))
    doc.region(name);
  for (const auto &name : doc.names("maps"))
    doc.map(name);
  for (const auto &name : doc.names("forms"))
    doc.form(name);
  for (const auto &name : doc.names("charts"))
    doc.chart(name);
  return doc;
}

std::string serialize_document(const Document &doc) { return doc.tree().dump(2) + "\n"; }

} // namespace tropcert
