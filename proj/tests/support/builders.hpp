#pragma once

// Small constructors shared by the test suites.

#include "tropcert/complex.hpp"
#include "tropcert/lp.hpp"

#include <initializer_list>

namespace tropcert::testing {

inline RatVector rv(std::initializer_list<long> xs) {
  RatVector v;
  for (long x : xs)
    v.emplace_back(x);
  return v;
}

inline IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs)
    v.emplace_back(x);
  return v;
}

inline RatVector unit(size_t r, size_t i, long s = 1) {
  RatVector e(r);
  e[i] = s;
  return e;
}

/// Ray {t·dir + base : t ≥ 0} for an integer direction in Z^r.
inline Polyhedron ray(const RatVector &dir, const RatVector &base) {
  const size_t r = dir.size();
  // Equations: the lines orthogonal to dir through base, plus ⟨dir, x - base⟩ ≥ 0.
  std::vector<Constraint> cs;
  RatMatrix m{dir};
  for (const auto &n : null_space(m, r))
    cs.push_back(equal(n, dot(n, base)));
  cs.push_back(greater_equal(dir, dot(dir, base)));
  return Polyhedron::make(r, cs);
}

inline Polyhedron ray(const RatVector &dir) { return ray(dir, RatVector(dir.size())); }

/// Segment between two points.
inline Polyhedron segment(const RatVector &p, const RatVector &q) {
  const size_t r = p.size();
  RatVector d = q - p;
  std::vector<Constraint> cs;
  RatMatrix m{d};
  for (const auto &n : null_space(m, r))
    cs.push_back(equal(n, dot(n, p)));
  cs.push_back(greater_equal(d, dot(d, p)));
  cs.push_back(less_equal(d, dot(d, q)));
  return Polyhedron::make(r, cs);
}

/// Cone generated by linearly independent directions from the origin.
inline Polyhedron simplicial_cone(const RatMatrix &gens, size_t r) {
  // Dual description: x = Σ λ_i g_i, λ_i ≥ 0. Solve for λ via the inverse on
  // the span; build constraints from the null space and dual basis.
  std::vector<Constraint> cs;
  for (const auto &n : null_space(gens, r))
    cs.push_back(equal(n, 0));
  // Dual basis: for each i a functional f_i with f_i(g_j) = δ_ij on span(gens).
  const size_t k = gens.size();
  for (size_t i = 0; i < k; ++i) {
    // Solve f·g_j = δ_ij, with f in span(gens).
    // f = Σ c_l g_l  =>  Σ c_l ⟨g_l, g_j⟩ = δ_ij
    RatMatrix gram(k, RatVector(k + 1));
    for (size_t a = 0; a < k; ++a) {
      for (size_t b = 0; b < k; ++b)
        gram[a][b] = dot(gens[a], gens[b]);
      gram[a][k] = a == i ? 1 : 0;
    }
    auto ech = rref(gram, k + 1);
    RatVector f(r);
    for (size_t row = 0; row < ech.rows.size(); ++row)
      for (size_t j = 0; j < r; ++j)
        f[j] += ech.rows[row][k] * gens[ech.pivots[row]][j];
    cs.push_back(greater_equal(f, 0));
  }
  return Polyhedron::make(r, cs);
}

inline Polyhedron halfspace(const RatVector &a, long b) {
  return Polyhedron::make(a.size(), {greater_equal(a, Rational(b))});
}

} // namespace tropcert::testing
