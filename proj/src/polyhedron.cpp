#include "tropcert/polyhedron.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace tropcert {

namespace {

struct RawRow {
  RatVector a;
  Rational b;
};

// (a, b) scaled by a positive factor to a primitive integer normal.
Halfspace normalize(const RatVector &a, const Rational &b) {
  IntVector n = primitive_integer_multiple(a);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      return {n, b * Rational(n[i]) / a[i]};
  return {n, b};
}

bool lex_less(const Halfspace &x, const Halfspace &y) {
  if (x.normal != y.normal)
    return x.normal < y.normal;
  return x.offset < y.offset;
}

std::vector<Constraint> system(const std::vector<Halfspace> &eqs,
                               const std::vector<Halfspace> &ineqs, Relation ineq_rel) {
  std::vector<Constraint> cs;
  cs.reserve(eqs.size() + ineqs.size());
  for (const auto &e : eqs)
    cs.push_back(equal(to_rational(e.normal), e.offset));
  for (const auto &h : ineqs)
    cs.push_back({to_rational(h.normal), h.offset, ineq_rel});
  return cs;
}

} // namespace

std::optional<Polyhedron> Polyhedron::try_make(size_t r, const std::vector<Constraint> &input) {
  std::vector<RawRow> raw_ineqs, raw_eqs;
  for (const auto &c : input) {
    if (c.a.size() != r)
      throw std::invalid_argument("Polyhedron: constraint of length " + std::to_string(c.a.size()) +
                                  " in ambient rank " + std::to_string(r));
    switch (c.rel) {
    case Relation::Equal:
      raw_eqs.push_back({c.a, c.b});
      break;
    case Relation::GreaterEqual:
      raw_ineqs.push_back({c.a, c.b});
      break;
    case Relation::Greater:
      throw std::invalid_argument("Polyhedron: strict constraints describe open sets");
    }
  }

  std::vector<Halfspace> eqs, ineqs;
  RatVector interior;
  for (;;) {
    RatMatrix aug;
    for (const auto &e : raw_eqs) {
      RatVector row = e.a;
      row.push_back(e.b);
      aug.push_back(std::move(row));
    }
    auto ech = rref(std::move(aug), r + 1);
    eqs.clear();
    for (size_t k = 0; k < ech.rows.size(); ++k) {
      if (ech.pivots[k] == r)
        return std::nullopt;
      RatVector a(ech.rows[k].begin(), ech.rows[k].begin() + static_cast<std::ptrdiff_t>(r));
      eqs.push_back(normalize(a, ech.rows[k][r]));
    }

    std::map<IntVector, Rational> tightest;
    for (const auto &row : raw_ineqs) {
      RatVector a = row.a;
      Rational b = row.b;
      for (size_t k = 0; k < ech.rows.size(); ++k) {
        Rational f = a[ech.pivots[k]];
        if (f == 0)
          continue;
        for (size_t j = 0; j < r; ++j)
          a[j] -= f * ech.rows[k][j];
        b -= f * ech.rows[k][r];
      }
      if (is_zero(a)) {
        if (b > 0)
          return std::nullopt;
        continue;
      }
      Halfspace h = normalize(a, b);
      auto [it, inserted] = tightest.emplace(h.normal, h.offset);
      if (!inserted && h.offset > it->second)
        it->second = h.offset;
    }
    ineqs.clear();
    for (auto &[n, b] : tightest)
      ineqs.push_back({n, b});

    if (auto w = lp_feasible(system(eqs, ineqs, Relation::Greater), r)) {
      interior = std::move(*w);
      break;
    }
    auto closed = system(eqs, ineqs, Relation::GreaterEqual);
    if (!is_feasible(closed, r))
      return std::nullopt;
    // Some inequalities hold with equality on the whole set; move them over.
    std::vector<RawRow> keep;
    bool moved = false;
    for (size_t i = 0; i < ineqs.size(); ++i) {
      auto probe = closed;
      probe[eqs.size() + i].rel = Relation::Greater;
      RawRow row{to_rational(ineqs[i].normal), ineqs[i].offset};
      if (is_feasible(probe, r)) {
        keep.push_back(std::move(row));
      } else {
        raw_eqs.push_back(std::move(row));
        moved = true;
      }
    }
    if (!moved)
      throw std::logic_error("Polyhedron: no implicit equality found for a flat system");
    raw_ineqs = std::move(keep);
  }

  // Drop redundant inequalities one at a time against the current set.
  for (size_t i = 0; i < ineqs.size();) {
    std::vector<Halfspace> others;
    for (size_t j = 0; j < ineqs.size(); ++j)
      if (j != i)
        others.push_back(ineqs[j]);
    auto probe = system(eqs, others, Relation::GreaterEqual);
    probe.push_back(less(to_rational(ineqs[i].normal), ineqs[i].offset));
    if (!is_feasible(probe, r))
      ineqs.erase(ineqs.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  std::sort(ineqs.begin(), ineqs.end(), lex_less);

  Polyhedron p;
  p.ambient_rank_ = r;
  p.equalities_ = std::move(eqs);
  p.inequalities_ = std::move(ineqs);
  p.interior_point_ = std::move(interior);
  std::string key = std::to_string(r) + "|";
  for (const auto &e : p.equalities_)
    key += to_string(e.normal) + "=" + to_string(e.offset) + ";";
  key += "|";
  for (const auto &h : p.inequalities_)
    key += to_string(h.normal) + ">" + to_string(h.offset) + ";";
  p.key_ = std::move(key);
  return p;
}

Polyhedron Polyhedron::make(size_t r, const std::vector<Constraint> &constraints) {
  auto p = try_make(r, constraints);
  if (!p)
    throw std::invalid_argument("Polyhedron: constraint system is empty");
  return std::move(*p);
}

Polyhedron Polyhedron::whole_space(size_t r) { return make(r, {}); }

Polyhedron Polyhedron::point(const RatVector &p) {
  std::vector<Constraint> cs;
  for (size_t i = 0; i < p.size(); ++i) {
    RatVector e(p.size());
    e[i] = 1;
    cs.push_back(equal(e, p[i]));
  }
  return make(p.size(), cs);
}

std::vector<Constraint> Polyhedron::constraints() const {
  return system(equalities_, inequalities_, Relation::GreaterEqual);
}

bool Polyhedron::contains(const RatVector &x) const {
  for (const auto &e : equalities_)
    if (dot(e.normal, x) != e.offset)
      return false;
  for (const auto &h : inequalities_)
    if (dot(h.normal, x) < h.offset)
      return false;
  return true;
}

bool Polyhedron::relint_contains(const RatVector &x) const {
  for (const auto &e : equalities_)
    if (dot(e.normal, x) != e.offset)
      return false;
  for (const auto &h : inequalities_)
    if (dot(h.normal, x) <= h.offset)
      return false;
  return true;
}

bool Polyhedron::contains(const Polyhedron &other) const {
  if (other.ambient_rank_ != ambient_rank_)
    throw std::invalid_argument("Polyhedron::contains: ambient ranks differ");
  if (!contains(other.interior_point_))
    return false;
  auto base = other.constraints();
  auto outside = [&](const RatVector &a, const Rational &b) {
    auto probe = base;
    probe.push_back(less(a, b));
    return is_feasible(probe, ambient_rank_);
  };
  for (const auto &h : inequalities_)
    if (outside(to_rational(h.normal), h.offset))
      return false;
  for (const auto &e : equalities_) {
    RatVector a = to_rational(e.normal);
    if (outside(a, e.offset) || outside(Rational(-1) * a, -e.offset))
      return false;
  }
  return true;
}

std::optional<Polyhedron> Polyhedron::intersect(const Polyhedron &other) const {
  if (other.ambient_rank_ != ambient_rank_)
    throw std::invalid_argument("Polyhedron::intersect: ambient ranks differ");
  auto cs = constraints();
  auto more = other.constraints();
  cs.insert(cs.end(), more.begin(), more.end());
  return try_make(ambient_rank_, cs);
}

std::optional<Polyhedron> Polyhedron::intersect(const std::vector<Constraint> &extra) const {
  auto cs = constraints();
  cs.insert(cs.end(), extra.begin(), extra.end());
  return try_make(ambient_rank_, cs);
}

std::vector<Polyhedron> Polyhedron::facets() const {
  std::vector<Polyhedron> out;
  auto base = constraints();
  for (size_t i = 0; i < inequalities_.size(); ++i) {
    auto cs = base;
    cs[equalities_.size() + i].rel = Relation::Equal;
    out.push_back(make(ambient_rank_, cs));
  }
  return out;
}

std::vector<Polyhedron> Polyhedron::faces() const {
  std::vector<Polyhedron> out{*this};
  std::set<std::string> seen{key_};
  for (size_t i = 0; i < out.size(); ++i) {
    for (auto &f : out[i].facets())
      if (seen.insert(f.key()).second)
        out.push_back(std::move(f));
  }
  return out;
}

bool Polyhedron::is_bounded() const {
  std::vector<Constraint> cone;
  for (const auto &e : equalities_)
    cone.push_back(equal(to_rational(e.normal), 0));
  for (const auto &h : inequalities_)
    cone.push_back(greater_equal(to_rational(h.normal), 0));
  for (size_t j = 0; j < ambient_rank_; ++j) {
    RatVector e(ambient_rank_);
    e[j] = 1;
    for (int s : {1, -1}) {
      auto probe = cone;
      probe.push_back(greater(Rational(s) * e, 0));
      if (is_feasible(probe, ambient_rank_))
        return false;
    }
  }
  return true;
}

Sublattice Polyhedron::lattice() const {
  std::vector<IntVector> rows;
  for (const auto &e : equalities_)
    rows.push_back(e.normal);
  return integer_kernel(rows, ambient_rank_);
}

RatMatrix Polyhedron::linear_basis() const {
  RatMatrix out;
  auto lat = lattice();
  for (const auto &b : lat.basis())
    out.push_back(to_rational(b));
  return out;
}

std::vector<Constraint> Polyhedron::tangent_cone(const RatVector &at) const {
  if (!contains(at))
    throw std::invalid_argument("tangent_cone: point not in polyhedron");
  std::vector<Constraint> cs;
  for (const auto &e : equalities_)
    cs.push_back(equal(to_rational(e.normal), 0));
  for (const auto &h : inequalities_)
    if (dot(h.normal, at) == h.offset)
      cs.push_back(greater_equal(to_rational(h.normal), 0));
  return cs;
}

Polyhedron Polyhedron::image(const IntegerMatrix &a, const RatVector &t) const {
  const size_t r = ambient_rank_;
  const size_t m = a.rows();
  if (a.cols() != r || t.size() != m)
    throw std::invalid_argument("Polyhedron::image: map dimensions do not match");
  const size_t n = r + m;
  // Variables (x, y); y = A x + t.
  std::vector<Constraint> rows;
  for (const auto &c : constraints()) {
    RatVector z(n);
    std::copy(c.a.begin(), c.a.end(), z.begin());
    rows.push_back({std::move(z), c.b, c.rel});
  }
  for (size_t i = 0; i < m; ++i) {
    RatVector z(n);
    for (size_t j = 0; j < r; ++j)
      z[j] = -Rational(a(i, j));
    z[r + i] = 1;
    rows.push_back(equal(std::move(z), t[i]));
  }
  for (size_t k = 0; k < r; ++k) {
    auto eq = std::find_if(rows.begin(), rows.end(), [&](const Constraint &c) {
      return c.rel == Relation::Equal && c.a[k] != 0;
    });
    if (eq != rows.end()) {
      Constraint pivot = *eq;
      rows.erase(eq);
      for (auto &c : rows) {
        if (c.a[k] == 0)
          continue;
        Rational f = c.a[k] / pivot.a[k];
        for (size_t j = 0; j < n; ++j)
          c.a[j] -= f * pivot.a[j];
        c.b -= f * pivot.b;
      }
      continue;
    }
    std::vector<Constraint> pos, neg, next;
    for (auto &c : rows) {
      if (c.a[k] > 0)
        pos.push_back(std::move(c));
      else if (c.a[k] < 0)
        neg.push_back(std::move(c));
      else
        next.push_back(std::move(c));
    }
    for (const auto &p : pos)
      for (const auto &q : neg) {
        Rational fp = -q.a[k], fq = p.a[k];
        RatVector z(n);
        for (size_t j = 0; j < n; ++j)
          z[j] = fp * p.a[j] + fq * q.a[j];
        z[k] = 0;
        next.push_back(greater_equal(std::move(z), fp * p.b + fq * q.b));
      }
    rows = make(n, next).constraints();
  }
  std::vector<Constraint> projected;
  for (const auto &c : rows) {
    RatVector y(c.a.begin() + static_cast<std::ptrdiff_t>(r), c.a.end());
    projected.push_back({std::move(y), c.b, c.rel});
  }
  return make(m, projected);
}

std::string Polyhedron::describe() const {
  std::string out = "{";
  bool first = true;
  for (const auto &e : equalities_) {
    out += (first ? "" : ", ") + to_string(e.normal) + "·x = " + to_string(e.offset);
    first = false;
  }
  for (const auto &h : inequalities_) {
    out += (first ? "" : ", ") + to_string(h.normal) + "·x >= " + to_string(h.offset);
    first = false;
  }
  return out + "}";
}

} // namespace tropcert
