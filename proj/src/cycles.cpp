#include "tropcert/cycles.hpp"

#include <set>
#include <stdexcept>

namespace tropcert {

namespace {

std::vector<Polyhedron> split(const Polyhedron &p, const std::vector<Hyperplane> &hyperplanes) {
  const size_t r = p.ambient_rank();
  std::vector<Polyhedron> current{p};
  for (const auto &h : hyperplanes) {
    std::vector<Polyhedron> next;
    for (auto &q : current) {
      auto below = q.constraints(), above = q.constraints();
      below.push_back(less(h.normal, h.offset));
      above.push_back(greater(h.normal, h.offset));
      if (!is_feasible(below, r) || !is_feasible(above, r)) {
        next.push_back(std::move(q));
        continue;
      }
      next.push_back(*q.intersect({greater_equal(h.normal, h.offset)}));
      next.push_back(*q.intersect({less_equal(h.normal, h.offset)}));
    }
    current = std::move(next);
  }
  return current;
}

std::string hull_key(const Polyhedron &p) {
  std::string key;
  for (const auto &e : p.equalities())
    key += to_string(e.normal) + "=" + to_string(e.offset) + ";";
  return key;
}

Sublattice lattice_sum(const Sublattice &a, const Sublattice &b) {
  auto gens = a.basis();
  gens.insert(gens.end(), b.basis().begin(), b.basis().end());
  return hermite_basis(gens, a.ambient_rank());
}

std::vector<Sublattice> face_lattices(const TropicalCycle &c) {
  std::map<std::vector<IntVector>, Sublattice> seen;
  for (size_t id : c.support_cells())
    for (size_t f : c.complex().faces_of(id)) {
      auto l = c.complex().cell(f).lattice();
      seen.emplace(l.basis(), l);
    }
  std::vector<Sublattice> out;
  for (auto &[k, l] : seen)
    out.push_back(std::move(l));
  return out;
}

void require_same_shape(const TropicalCycle &a, const TropicalCycle &b, const char *what) {
  if (a.ambient_rank() != b.ambient_rank() || a.dim() != b.dim())
    throw std::invalid_argument(std::string(what) + ": cycles differ in ambient rank or dimension");
}

std::vector<std::pair<Polyhedron, Rational>> weighted_cells(const TropicalCycle &c,
                                                            const Rational &scale = 1) {
  std::vector<std::pair<Polyhedron, Rational>> out;
  for (size_t id : c.support_cells())
    out.emplace_back(c.complex().cell(id), scale * c.weight(id));
  return out;
}

} // namespace

RatVector AffineMap::apply(const RatVector &x) const { return matrix.apply(x) + translation; }

AffineMap AffineMap::identity(size_t r) { return {IntegerMatrix::identity(r), RatVector(r)}; }

TropicalCycle TropicalCycle::make(PolyComplex complex, size_t dim, std::map<size_t, Rational> weights,
                                  bool check_balanced) {
  for (const auto &[id, w] : weights) {
    if (id >= complex.size())
      throw std::invalid_argument("TropicalCycle: weight on unknown cell " + std::to_string(id));
    if (complex.cell(id).dim() != dim)
      throw std::invalid_argument("TropicalCycle: weighted cell '" + complex.label(id) +
                                  "' has dimension " + std::to_string(complex.cell(id).dim()) +
                                  ", expected " + std::to_string(dim));
  }
  for (size_t id : complex.maximal_cells())
    if (complex.cell(id).dim() != dim)
      throw std::invalid_argument("TropicalCycle: maximal cell '" + complex.label(id) +
                                  "' has dimension " + std::to_string(complex.cell(id).dim()) +
                                  ", expected " + std::to_string(dim));
  TropicalCycle c;
  c.complex_ = std::move(complex);
  c.dim_ = dim;
  for (auto &[id, w] : weights)
    if (w != 0)
      c.weights_.emplace(id, w);
  if (check_balanced) {
    auto rep = balance_report(c);
    if (!rep.balanced)
      throw std::invalid_argument("TropicalCycle: not balanced at cell '" +
                                  c.complex_.label(rep.cell) + "'");
  }
  return c;
}

TropicalCycle TropicalCycle::from_cells(size_t r, size_t dim,
                                        const std::vector<std::pair<Polyhedron, Rational>> &cells,
                                        bool check_balanced) {
  std::vector<Polyhedron> gens;
  for (const auto &[p, w] : cells)
    if (w != 0)
      gens.push_back(p);
  auto complex = PolyComplex::from_cells(r, gens);
  std::map<size_t, Rational> weights;
  for (const auto &[p, w] : cells)
    if (w != 0)
      weights[*complex.find(p)] += w;
  return make(std::move(complex), dim, std::move(weights), check_balanced);
}

TropicalCycle TropicalCycle::ambient(size_t r, const Rational &weight) {
  return from_cells(r, r, {{Polyhedron::whole_space(r), weight}}, false);
}

TropicalCycle TropicalCycle::empty(size_t r, size_t dim) {
  return make(PolyComplex::from_cells(r, {}), dim, {}, false);
}

Rational TropicalCycle::weight(size_t id) const {
  auto it = weights_.find(id);
  return it == weights_.end() ? Rational(0) : it->second;
}

std::vector<size_t> TropicalCycle::support_cells() const {
  std::vector<size_t> out;
  for (const auto &[id, w] : weights_)
    out.push_back(id);
  return out;
}

TropicalCycle TropicalCycle::transported_to(const PolyComplex &fine) const {
  auto prov = provenance(fine, complex_);
  std::map<size_t, Rational> w;
  for (size_t id : fine.cells_of_dim(dim_))
    if (prov[id] != npos && complex_.cell(prov[id]).dim() == dim_)
      w[id] = weight(prov[id]);
  return make(fine, dim_, std::move(w), false);
}

TropicalCycle TropicalCycle::refined_along(const std::vector<Hyperplane> &hyperplanes) const {
  return transported_to(subdivide_along(complex_, hyperplanes));
}

IntVector outgoing_vector(const Polyhedron &sigma, const Polyhedron &tau) {
  auto d = primitive_integer_multiple(sigma.interior_point() - tau.interior_point());
  return primitive_quotient_vector(d, tau.lattice());
}

BalanceReport balance_report(const TropicalCycle &c) {
  BalanceReport rep;
  if (c.dim() == 0)
    return rep;
  const auto &cx = c.complex();
  for (size_t tau : cx.cells_of_dim(c.dim() - 1)) {
    QuotientMap q(cx.cell(tau).lattice());
    RatVector sum(q.quotient_rank());
    for (size_t sigma : cx.cofacets(tau)) {
      auto w = c.weight(sigma);
      if (w == 0)
        continue;
      sum = sum + w * to_rational(q.coordinates(outgoing_vector(cx.cell(sigma), cx.cell(tau))));
    }
    if (!is_zero(sum))
      return {false, tau, sum};
  }
  return rep;
}

EffectivityReport effectivity_report(const TropicalCycle &c, const OpenRegion &omega) {
  for (size_t id : c.support_cells()) {
    auto w = c.weight(id);
    if (w < 0 && cell_meets_region(c.complex().cell(id), omega))
      return {false, id, w};
  }
  return {};
}

TropicalCycle assemble_cycle(size_t r, size_t dim,
                             const std::vector<std::pair<Polyhedron, Rational>> &cells) {
  std::vector<Polyhedron> polys;
  for (const auto &[p, w] : cells) {
    if (p.ambient_rank() != r || p.dim() != dim)
      throw std::invalid_argument("assemble_cycle: cell has the wrong rank or dimension");
    if (w != 0)
      polys.push_back(p);
  }
  auto hyperplanes = supporting_hyperplanes(polys);
  std::map<std::string, std::pair<Polyhedron, Rational>> acc;
  for (const auto &[p, w] : cells) {
    if (w == 0)
      continue;
    for (auto &piece : split(p, hyperplanes)) {
      auto key = piece.key();
      auto it = acc.find(key);
      if (it == acc.end())
        acc.emplace(std::move(key), std::make_pair(std::move(piece), w));
      else
        it->second.second += w;
    }
  }
  std::vector<std::pair<Polyhedron, Rational>> merged;
  for (auto &[k, pw] : acc)
    if (pw.second != 0)
      merged.push_back(std::move(pw));
  return TropicalCycle::from_cells(r, dim, merged, false);
}

TropicalCycle pushforward(const AffineMap &f, const TropicalCycle &c) {
  if (f.source_rank() != c.ambient_rank() || f.translation.size() != f.target_rank())
    throw std::invalid_argument("pushforward: map dimensions do not match the cycle");
  const size_t s = f.target_rank();
  std::vector<std::pair<Polyhedron, Rational>> images;
  for (size_t id : c.support_cells()) {
    const auto &cell = c.complex().cell(id);
    auto img = cell.image(f.matrix, f.translation);
    if (img.dim() != c.dim())
      continue;
    std::vector<IntVector> gens;
    auto lat = cell.lattice();
    for (const auto &b : lat.basis())
      gens.push_back(f.matrix.apply(b));
    auto idx = lattice_index(img.lattice(), hermite_basis(gens, s));
    images.emplace_back(std::move(img), c.weight(id) * Rational(idx));
  }
  return assemble_cycle(s, c.dim(), images);
}

bool is_generic_displacement(const TropicalCycle &c1, const TropicalCycle &c2, const RatVector &v) {
  const size_t r = c1.ambient_rank();
  if (v.size() != r)
    throw std::invalid_argument("displacement vector has the wrong length");
  auto l1 = face_lattices(c1), l2 = face_lattices(c2);
  std::set<std::vector<IntVector>> sums;
  for (const auto &a : l1)
    for (const auto &b : l2) {
      auto s = lattice_sum(a, b);
      if (s.rank() < r)
        sums.insert(s.basis());
    }
  for (const auto &basis : sums) {
    RatMatrix m;
    for (const auto &b : basis)
      m.push_back(to_rational(b));
    m.push_back(v);
    if (rank(m, r) == basis.size())
      return false;
  }
  return true;
}

RatVector generic_displacement(const TropicalCycle &c1, const TropicalCycle &c2) {
  const size_t r = c1.ambient_rank();
  for (long t = 2; t < 10000; ++t) {
    RatVector v(r);
    Rational p = 1;
    for (size_t i = 0; i < r; ++i, p *= t)
      v[i] = p;
    if (is_generic_displacement(c1, c2, v))
      return v;
  }
  throw std::logic_error("generic_displacement: no generic vector found");
}

std::vector<IntersectionPiece> stable_intersection_pieces(const TropicalCycle &c1, const TropicalCycle &c2,
                                                          const RatVector &v) {
  const size_t r = c1.ambient_rank();
  if (c2.ambient_rank() != r)
    throw std::invalid_argument("stable_intersection: ambient ranks differ");
  if (c1.dim() + c2.dim() < r)
    throw std::invalid_argument("stable_intersection: dimensions " + std::to_string(c1.dim()) +
                                " + " + std::to_string(c2.dim()) + " are below the ambient rank " +
                                std::to_string(r));
  if (!is_generic_displacement(c1, c2, v))
    throw std::invalid_argument("stable_intersection: displacement " + to_string(v) + " is not generic");
  const size_t d = c1.dim() + c2.dim() - r;
  std::vector<IntersectionPiece> out;
  for (size_t a : c1.support_cells())
    for (size_t b : c2.support_cells()) {
      const auto &da = c1.complex().cell(a);
      const auto &db = c2.complex().cell(b);
      auto meet = da.intersect(db);
      if (!meet || meet->dim() != d)
        continue;
      auto sum = lattice_sum(da.lattice(), db.lattice());
      if (sum.rank() < r)
        continue;
      // x ∈ Δ, x − εv ∈ Δ', ε > 0 in variables (x, ε)
      std::vector<Constraint> sys;
      for (auto c : da.constraints()) {
        c.a.push_back(0);
        sys.push_back(std::move(c));
      }
      for (auto c : db.constraints()) {
        c.a.push_back(-dot(c.a, v));
        sys.push_back(std::move(c));
      }
      RatVector eps(r + 1);
      eps[r] = 1;
      sys.push_back(greater(eps, 0));
      if (!is_feasible(sys, r + 1))
        continue;
      auto idx = lattice_index(Sublattice::full(r), sum);
      out.push_back({std::move(*meet), a, b, c1.weight(a) * c2.weight(b) * Rational(idx), idx});
    }
  return out;
}

TropicalCycle stable_intersection(const TropicalCycle &c1, const TropicalCycle &c2,
                                  const std::optional<RatVector> &given) {
  if (c2.ambient_rank() != c1.ambient_rank())
    throw std::invalid_argument("stable_intersection: ambient ranks differ");
  if (c1.dim() + c2.dim() < c1.ambient_rank())
    throw std::invalid_argument("stable_intersection: dimensions " + std::to_string(c1.dim()) +
                                " + " + std::to_string(c2.dim()) + " are below the ambient rank " +
                                std::to_string(c1.ambient_rank()));
  RatVector v = given ? *given : generic_displacement(c1, c2);
  std::vector<std::pair<Polyhedron, Rational>> cells;
  for (auto &piece : stable_intersection_pieces(c1, c2, v))
    cells.emplace_back(std::move(piece.cell), piece.multiplicity);
  return assemble_cycle(c1.ambient_rank(), c1.dim() + c2.dim() - c1.ambient_rank(), cells);
}

Rational degree_zero_cycle(const TropicalCycle &c) {
  if (c.dim() != 0)
    throw std::invalid_argument("degree_zero_cycle: cycle has dimension " + std::to_string(c.dim()));
  Rational total = 0;
  for (const auto &[id, w] : c.weights())
    total += w;
  return total;
}

TropicalCycle operator+(const TropicalCycle &a, const TropicalCycle &b) {
  require_same_shape(a, b, "cycle sum");
  auto cells = weighted_cells(a);
  auto more = weighted_cells(b);
  cells.insert(cells.end(), more.begin(), more.end());
  return assemble_cycle(a.ambient_rank(), a.dim(), cells);
}

TropicalCycle operator*(const Rational &s, const TropicalCycle &c) {
  std::map<size_t, Rational> w;
  for (const auto &[id, x] : c.weights())
    w.emplace(id, s * x);
  return TropicalCycle::make(c.complex(), c.dim(), std::move(w), false);
}

TropicalCycle operator-(const TropicalCycle &a, const TropicalCycle &b) { return a + Rational(-1) * b; }

bool same_cycle(const TropicalCycle &a, const TropicalCycle &b) {
  if (a.ambient_rank() != b.ambient_rank())
    return false;
  if (a.dim() != b.dim())
    return a.is_empty() && b.is_empty();
  std::map<std::string, Rational> fa, fb;
  for (size_t id : a.support_cells())
    fa[a.complex().cell(id).key()] += a.weight(id);
  for (size_t id : b.support_cells())
    fb[b.complex().cell(id).key()] += b.weight(id);
  if (fa == fb)
    return true;
  // Cells overlapping in dimension n share their affine hull; compare the
  // weight functions hull by hull on the arrangement of that hull's facets.
  std::map<std::string, std::vector<std::pair<Polyhedron, Rational>>> by_hull;
  auto add = [&](const TropicalCycle &c, const Rational &sign) {
    for (size_t id : c.support_cells())
      by_hull[hull_key(c.complex().cell(id))].emplace_back(c.complex().cell(id), sign * c.weight(id));
  };
  add(a, 1);
  add(b, -1);
  for (const auto &[hull, cells] : by_hull) {
    std::vector<Hyperplane> hyperplanes;
    std::set<std::string> seen;
    for (const auto &[p, w] : cells)
      for (const auto &h : p.inequalities())
        if (seen.insert(to_string(h.normal) + ">=" + to_string(h.offset)).second)
          hyperplanes.push_back({to_rational(h.normal), h.offset});
    std::map<std::string, Rational> acc;
    for (const auto &[p, w] : cells)
      for (const auto &piece : split(p, hyperplanes))
        acc[piece.key()] += w;
    for (const auto &[k, w] : acc)
      if (w != 0)
        return false;
  }
  return true;
}

} // namespace tropcert
