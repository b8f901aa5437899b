#include "tropcert/cli.hpp"

#include "tropcert/document.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <sstream>

namespace tropcert::cli {

using nlohmann::json;

namespace {

struct Options {
  std::string format = "text";
  uint64_t seed = 0;
  bool strict = false;
  bool lenient = false;
  std::vector<std::string> set;
  std::string file;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json to_json(const Rational &q) { return to_string(q); }

json to_json(const RatVector &v) {
  json out = json::array();
  for (const auto &x : v)
    out.push_back(to_string(x));
  return out;
}

std::string text(const RatVector &v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i)
    out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

std::string text(const json &v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i)
    out += (i ? ", " : "") + v[i].get<std::string>();
  return out + ")";
}

json cell_json(const Polyhedron &p) {
  json cs = json::array();
  for (const auto &c : p.constraints()) {
    const char *rel = c.rel == Relation::Equal ? "=" : c.rel == Relation::Greater ? ">" : ">=";
    cs.push_back({{"a", to_json(c.a)}, {"rel", rel}, {"b", to_json(c.b)}});
  }
  return {{"constraints", cs}};
}

json cycle_json(const TropicalCycle &c) {
  json cells = json::array(), points = json::array();
  for (size_t id : c.support_cells()) {
    const auto &cell = c.complex().cell(id);
    cells.push_back({{"cell", cell_json(cell)}, {"weight", to_json(c.weight(id))}});
    points.push_back(to_json(cell.interior_point()));
  }
  return {{"cycle", {{"ambient_rank", c.ambient_rank()}, {"dim", c.dim()}, {"cells", cells}}}, {"points", points}};
}

json witness_json(const Witness &w, const std::string &chart = "") {
  json out = {{"condition", w.condition},
              {"cell", w.cell},
              {"complex", w.complex},
              {"value", to_json(w.value)},
              {"point", to_json(w.point)}};
  if (!chart.empty())
    out["chart"] = chart;
  return out;
}

// Report under construction; `status` drives the exit code.
struct Report {
  std::string command;
  std::string status;
  int exit_code = Yes;
  json payload = json::object();
  json witnesses = json::array();
  std::vector<std::string> lines;

  json to_json() const {
    return {{"command", command},
            {"status", status},
            {"exit_code", exit_code},
            {"payload", payload},
            {"witnesses", witnesses}};
  }
};

int exit_for(const std::string &status) {
  if (status == "no" || status == "not_psh")
    return No;
  if (status == "unknown")
    return Unknown;
  return Yes;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  if (in.bad())
    throw InputError("cannot read '" + path + "'");
  return ss.str();
}

Parameters parse_sets(const Document &doc, const std::vector<std::string> &sets) {
  Parameters declared = doc.parameters(), out;
  for (const auto &s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("--set expects name=value, got '" + s + "'");
    auto name = s.substr(0, eq);
    if (!declared.count(name))
      throw UsageError("--set: '" + name + "' is not a declared parameter");
    try {
      out[name] = parse_rational(s.substr(eq + 1));
    } catch (const std::invalid_argument &) {
      throw UsageError("--set: '" + s.substr(eq + 1) + "' is not a rational");
    }
  }
  return out;
}

// Checks the table holding `name` before building.
void expect_kind(const Document &doc, const std::string &name, const std::string &table, const std::string &flag) {
  auto kind = doc.kind_of(name);
  if (kind.empty())
    throw DocumentError(DocumentError::Kind::Reference, flag, "no object named '" + name + "'");
  if (kind != table)
    throw DocumentError(DocumentError::Kind::Reference, flag,
                        "'" + name + "' is in " + kind + ", this command needs an entry of " + table);
}

std::string tri_status(Tri t) { return t == Tri::Yes ? "yes" : t == Tri::No ? "no" : "unknown"; }

void add_verdict_lines(Report &rep, const std::string &chart, const Verdict &v) {
  rep.lines.push_back("chart " + chart + ": " + to_string(v.status));
  for (const auto &w : v.witnesses)
    rep.lines.push_back("  witness " + w.condition + ": cell " + std::to_string(w.cell) + " of the " + w.complex +
                        ", value " + to_string(w.value) + " at " + text(w.point));
  for (const auto &n : v.notes)
    rep.lines.push_back("  note: " + n);
}

// Combined status over charts: any not_psh wins, then unknown.
std::string combine(const std::vector<PshStatus> &all) {
  PshStatus s = PshStatus::Psh;
  for (auto x : all) {
    if (x == PshStatus::NotPsh)
      return to_string(PshStatus::NotPsh);
    if (x == PshStatus::Unknown)
      s = PshStatus::Unknown;
  }
  return to_string(s);
}

template <class F>
void chart_command(Report &rep, const Document &doc, const Parameters &params, std::vector<std::string> charts, F &&f) {
  if (charts.empty())
    charts = doc.names("charts");
  if (charts.empty())
    throw DocumentError(DocumentError::Kind::Reference, "--chart", "the document has no charts");
  for (const auto &c : charts)
    expect_kind(doc, c, "charts", "--chart");
  std::vector<std::future<std::pair<Verdict, json>>> jobs;
  for (const auto &c : charts)
    jobs.push_back(std::async(std::launch::async, [&, c] { return f(doc.chart(c, params)); }));
  std::vector<PshStatus> statuses;
  json entries = json::array();
  for (size_t i = 0; i < charts.size(); ++i) {
    auto [v, extra] = jobs[i].get();
    statuses.push_back(v.status);
    json entry = {{"name", charts[i]}, {"status", to_string(v.status)}, {"notes", v.notes}};
    entry.update(extra);
    entries.push_back(entry);
    for (const auto &w : v.witnesses)
      rep.witnesses.push_back(witness_json(w, charts[i]));
    add_verdict_lines(rep, charts[i], v);
  }
  rep.payload["charts"] = entries;
  rep.status = combine(statuses);
}

std::string render_text(const Report &rep) {
  std::string out = rep.command + ": " + rep.status + " (exit " + std::to_string(rep.exit_code) + ")\n";
  for (const auto &l : rep.lines)
    out += l + "\n";
  return out;
}

json error_json(const std::string &command, int code, const std::string &kind, const std::string &message,
                const DocumentError *doc_error = nullptr) {
  json e = {{"kind", kind}, {"message", message}};
  if (doc_error) {
    e["path"] = doc_error->path();
    if (doc_error->line()) {
      e["line"] = doc_error->line();
      e["column"] = doc_error->column();
    }
  }
  return {{"command", command},
          {"status", "error"},
          {"exit_code", code},
          {"payload", {{"error", e}}},
          {"witnesses", json::array()}};
}

std::string kind_name(DocumentError::Kind k) {
  switch (k) {
  case DocumentError::Kind::Syntax:
    return "syntax";
  case DocumentError::Kind::Schema:
    return "schema";
  case DocumentError::Kind::Reference:
    return "reference";
  default:
    return "invariant";
  }
}

void add_common(CLI::App *app, Options &o) {
  app->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app->add_option("--seed", o.seed, "Seed for sampled positivity tests");
  auto strict = app->add_flag("--strict", o.strict, "Reject faces meeting several region clauses (default)");
  app->add_flag("--lenient", o.lenient, "Test each region clause separately")->excludes(strict);
  app->add_option("--set", o.set, "Parameter overrides name=value")->expected(1, -1);
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Exact tropical cycles, superform positivity and psh certificates", "tropcert"};
  app.require_subcommand(1);
  add_common(&app, o);

  struct Names {
    std::string cycle, region, function, map, a, b, form, mode = "weak";
    std::vector<std::string> charts, direction;
    bool degree = false;
  } n;

  auto sub = [&](const char *name, const char *desc) {
    auto *s = app.add_subcommand(name, desc);
    s->add_option("file", o.file, "Document")->required();
    add_common(s, o);
    return s;
  };
  auto *balance = sub("balance", "Check the balancing condition of a cycle");
  balance->add_option("--cycle", n.cycle)->required();
  auto *effective = sub("effective", "Check that cycle weights are nonnegative on a region");
  effective->add_option("--cycle", n.cycle)->required();
  effective->add_option("--region", n.region);
  auto *corner = sub("corner-locus", "Corner locus of a piecewise linear function");
  corner->add_option("--function", n.function)->required();
  auto *push = sub("push", "Pushforward of a cycle along an integer affine map");
  push->add_option("--map", n.map)->required();
  push->add_option("--cycle", n.cycle)->required();
  auto *intersect = sub("intersect", "Stable intersection of two cycles");
  intersect->add_option("--a", n.a)->required();
  intersect->add_option("--b", n.b)->required();
  intersect->add_flag("--degree", n.degree, "Report the total weight of a 0-dimensional result");
  intersect->add_option("--direction", n.direction, "Displacement vector")->expected(1, -1);
  auto *psh = sub("psh-check", "Face convexity and corner-locus effectivity on a chart");
  psh->add_option("--chart", n.charts)->expected(1, -1);
  auto *strong = sub("psh-strong", "Positivity of the corner locus of the ambient extension");
  strong->add_option("--chart", n.charts)->expected(1, -1);
  auto *graph = sub("graph-ma", "Outgoing-slope measure on a 1-dimensional chart");
  graph->add_option("--chart", n.charts)->expected(1, -1);
  auto *toric = sub("toric-check", "Global convexity of a function on R^r");
  toric->add_option("--function", n.function)->required();
  auto *positivity = sub("positivity", "Positivity of a constant superform");
  positivity->add_option("--form", n.form)->required();
  positivity->add_option("--mode", n.mode)->check(CLI::IsMember({"weak", "positive", "strong"}));

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' && !app.get_subcommand_no_throw(args[0])) {
    err << "tropcert: unknown command '" << args[0] << "'\n" << "run 'tropcert --help' for usage\n";
    return Usage;
  }
  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (auto *s : app.get_subcommands())
        if (s->parsed())
          out << s->help();
      return Yes;
    }
    err << "tropcert: " << e.what() << "\n" << "run 'tropcert --help' for usage\n";
    return Usage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  auto fail = [&](int code, const std::string &kind, std::string message, const DocumentError *de = nullptr) {
    if (message.starts_with(command + ": "))
      message.erase(0, command.size() + 2);
    err << "tropcert " << command << ": " << message << "\n";
    if (o.format == "json")
      out << error_json(command, code, kind, message, de).dump(2) << "\n";
    return code;
  };

  Report rep;
  rep.command = command;
  try {
    Document doc = parse_document(read_file(o.file));
    Parameters params = parse_sets(doc, o.set);
    CertifyOptions copts;
    copts.mode = o.lenient ? RegionMode::Lenient : RegionMode::Strict;
    copts.positivity.seed = o.seed;

    if (command == "balance") {
      expect_kind(doc, n.cycle, "cycles", "--cycle");
      auto c = doc.cycle(n.cycle, params);
      auto b = balance_report(c);
      rep.status = b.balanced ? "yes" : "no";
      rep.payload = {{"balanced", b.balanced}};
      rep.lines.push_back("cycle " + n.cycle + ": " + (b.balanced ? "balanced" : "not balanced"));
      if (!b.balanced) {
        const auto &cell = c.complex().cell(b.cell);
        rep.payload["defect"] = to_json(b.defect);
        rep.witnesses.push_back({{"condition", "balancing"},
                                 {"cell", b.cell},
                                 {"complex", "cycle"},
                                 {"defect", to_json(b.defect)},
                                 {"point", to_json(cell.interior_point())}});
        rep.lines.push_back("  witness balancing: cell " + std::to_string(b.cell) + " at " +
                            text(cell.interior_point()) + ", defect " + text(b.defect));
      }
    } else if (command == "effective") {
      expect_kind(doc, n.cycle, "cycles", "--cycle");
      auto c = doc.cycle(n.cycle, params);
      OpenRegion omega = OpenRegion::everything(c.ambient_rank());
      if (!n.region.empty()) {
        expect_kind(doc, n.region, "regions", "--region");
        omega = doc.region(n.region, params);
        if (omega.ambient_rank != c.ambient_rank())
          throw std::invalid_argument("region and cycle have different ambient ranks");
      }
      bool effective = true;
      for (size_t id : c.support_cells()) {
        const auto &cell = c.complex().cell(id);
        if (c.weight(id) < 0 && cell_meets_region(cell, omega)) {
          effective = false;
          Witness w{"effectivity", id, "cycle", c.weight(id), cell.interior_point()};
          rep.witnesses.push_back(witness_json(w));
          rep.lines.push_back("  witness effectivity: cell " + std::to_string(id) + ", weight " +
                              to_string(w.value) + " at " + text(w.point));
        }
      }
      rep.status = effective ? "yes" : "no";
      rep.payload = {{"effective", effective}};
      rep.lines.insert(rep.lines.begin(), "cycle " + n.cycle + ": " + (effective ? "effective" : "not effective"));
    } else if (command == "corner-locus" || command == "push") {
      TropicalCycle c;
      if (command == "corner-locus") {
        expect_kind(doc, n.function, "functions", "--function");
        c = corner_locus(doc.function(n.function, params));
      } else {
        expect_kind(doc, n.map, "maps", "--map");
        expect_kind(doc, n.cycle, "cycles", "--cycle");
        auto f = doc.map(n.map, params);
        auto src = doc.cycle(n.cycle, params);
        if (f.source_rank() != src.ambient_rank())
          throw std::invalid_argument("map source rank " + std::to_string(f.source_rank()) +
                                      " differs from the cycle's ambient rank " + std::to_string(src.ambient_rank()));
        c = pushforward(f, src);
      }
      rep.status = "success";
      rep.payload = cycle_json(c);
      rep.lines.push_back("cycle of dimension " + std::to_string(c.dim()) + " in R^" +
                          std::to_string(c.ambient_rank()) + " with " + std::to_string(c.support_cells().size()) +
                          " weighted cells");
      for (size_t id : c.support_cells())
        rep.lines.push_back("  weight " + to_string(c.weight(id)) + " on " + c.complex().cell(id).describe() +
                            " through " + text(c.complex().cell(id).interior_point()));
    } else if (command == "intersect") {
      expect_kind(doc, n.a, "cycles", "--a");
      expect_kind(doc, n.b, "cycles", "--b");
      auto a = doc.cycle(n.a, params), b = doc.cycle(n.b, params);
      std::optional<RatVector> v;
      if (!n.direction.empty()) {
        RatVector d;
        for (const auto &s : n.direction) {
          try {
            d.push_back(parse_rational(s));
          } catch (const std::invalid_argument &) {
            throw UsageError("--direction: '" + s + "' is not a rational");
          }
        }
        if (d.size() != a.ambient_rank())
          throw UsageError("--direction needs " + std::to_string(a.ambient_rank()) + " entries");
        v = d;
      }
      auto c = stable_intersection(a, b, v);
      rep.status = "success";
      if (n.degree) {
        if (c.dim() != 0)
          throw std::invalid_argument("--degree needs a 0-dimensional intersection, got dimension " +
                                      std::to_string(c.dim()));
        auto d = degree_zero_cycle(c);
        rep.payload = {{"degree", to_json(d)}};
        rep.lines.push_back("degree " + to_string(d));
      } else {
        rep.payload = cycle_json(c);
        rep.lines.push_back("intersection of dimension " + std::to_string(c.dim()) + " with " +
                            std::to_string(c.support_cells().size()) + " weighted cells");
        for (size_t id : c.support_cells())
          rep.lines.push_back("  weight " + to_string(c.weight(id)) + " through " +
                              text(c.complex().cell(id).interior_point()));
      }
    } else if (command == "psh-check") {
      chart_command(rep, doc, params, n.charts,
                    [&](const TropicalChart &ch) { return std::pair{certify_psh(ch, copts), json::object()}; });
    } else if (command == "psh-strong") {
      chart_command(rep, doc, params, n.charts,
                    [&](const TropicalChart &ch) { return std::pair{certify_psh_strong(ch, copts), json::object()}; });
    } else if (command == "graph-ma") {
      chart_command(rep, doc, params, n.charts, [&](const TropicalChart &ch) {
        auto g = graph_slope_check(ch);
        json masses = json::array();
        for (size_t i = 0; i < g.measure.points.size(); ++i)
          masses.push_back({{"point", to_json(g.measure.points[i])}, {"mass", to_json(g.measure.masses[i])}});
        return std::pair{g.verdict, json{{"measure", masses}}};
      });
      for (const auto &entry : rep.payload["charts"])
        for (const auto &m : entry["measure"])
          rep.lines.push_back("  mass " + m["mass"].get<std::string>() + " at " + text(m["point"]) + " on chart " +
                              entry["name"].get<std::string>());
    } else if (command == "toric-check") {
      expect_kind(doc, n.function, "functions", "--function");
      auto v = toric_check(doc.function(n.function, params));
      rep.status = to_string(v.status);
      for (const auto &w : v.witnesses)
        rep.witnesses.push_back(witness_json(w));
      add_verdict_lines(rep, n.function, v);
      rep.lines.front() = "function " + n.function + ": " + to_string(v.status);
    } else {
      expect_kind(doc, n.form, "forms", "--form");
      auto alpha = doc.form(n.form, params);
      PositivityVerdict v = n.mode == "weak"       ? is_weakly_positive(alpha, copts.positivity)
                            : n.mode == "strong" ? is_strongly_positive(alpha, copts.positivity)
                                                 : positivity_report(alpha);
      rep.status = tri_status(v.verdict);
      json gammas = json::array();
      for (const auto &g : v.gammas)
        gammas.push_back(to_json(g));
      rep.payload = {{"mode", n.mode}, {"method", v.method}, {"rank", alpha.rank()}, {"p", alpha.p()},
                     {"q", alpha.q()}};
      rep.lines.push_back("form " + n.form + " (" + n.mode + "): " + rep.status + " by " + v.method);
      if (!v.gammas.empty() || !v.beta.empty()) {
        json w = {{"condition", "positivity"}, {"value", to_json(v.value)}, {"gammas", gammas}};
        if (!v.beta.empty())
          w["beta"] = to_json(v.beta);
        rep.witnesses.push_back(w);
        std::string line = "  witness positivity: value " + to_string(v.value);
        for (const auto &g : v.gammas)
          line += ", gamma " + text(g);
        if (!v.beta.empty())
          line += ", beta " + text(v.beta);
        rep.lines.push_back(line);
      }
    }
  } catch (const UsageError &e) {
    err << "tropcert " << command << ": " << e.what() << "\n";
    return Usage;
  } catch (const InputError &e) {
    return fail(NoInput, "input", e.what());
  } catch (const DocumentError &e) {
    return fail(DataError, kind_name(e.kind()), e.what(), &e);
  } catch (const std::invalid_argument &e) {
    return fail(DataError, "domain", e.what());
  } catch (const std::out_of_range &e) {
    return fail(DataError, "domain", e.what());
  } catch (const std::exception &e) {
    return fail(Internal, "internal", e.what());
  }
  rep.exit_code = exit_for(rep.status);
  if (o.format == "json")
    out << rep.to_json().dump(2) << "\n";
  else
    out << render_text(rep);
  return rep.exit_code;
}

} // namespace tropcert::cli
