#include "tropcert/lattice.hpp"

#include <stdexcept>

namespace tropcert {

namespace {

using boost::multiprecision::abs;

// Row HNF of the rows in place; returns the nonzero rows.
std::vector<IntVector> row_hermite(std::vector<IntVector> m, size_t cols) {
  size_t pivot_row = 0;
  for (size_t c = 0; c < cols && pivot_row < m.size(); ++c) {
    // Euclid on column c among rows >= pivot_row.
    for (;;) {
      size_t best = m.size();
      for (size_t i = pivot_row; i < m.size(); ++i)
        if (m[i][c] != 0 && (best == m.size() || abs(m[i][c]) < abs(m[best][c])))
          best = i;
      if (best == m.size())
        break;
      std::swap(m[best], m[pivot_row]);
      bool cleared = true;
      for (size_t i = pivot_row + 1; i < m.size(); ++i) {
        if (m[i][c] == 0)
          continue;
        BigInt q = m[i][c] / m[pivot_row][c];
        for (size_t j = c; j < cols; ++j)
          m[i][j] -= q * m[pivot_row][j];
        if (m[i][c] != 0)
          cleared = false;
      }
      if (cleared)
        break;
    }
    if (pivot_row >= m.size() || m[pivot_row][c] == 0)
      continue;
    if (m[pivot_row][c] < 0)
      for (auto &x : m[pivot_row])
        x = -x;
    const BigInt &p = m[pivot_row][c];
    for (size_t i = 0; i < pivot_row; ++i) {
      // floor division keeps the reduced entry in [0, p).
      BigInt q = m[i][c] / p;
      if (m[i][c] - q * p < 0)
        q -= 1;
      if (q != 0)
        for (size_t j = c; j < cols; ++j)
          m[i][j] -= q * m[pivot_row][j];
    }
    ++pivot_row;
  }
  m.resize(pivot_row);
  return m;
}

size_t leading_column(const IntVector &v) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0)
      return i;
  return v.size();
}

} // namespace

Sublattice Sublattice::full(size_t ambient_rank) {
  std::vector<IntVector> gens;
  for (size_t i = 0; i < ambient_rank; ++i) {
    IntVector e(ambient_rank);
    e[i] = 1;
    gens.push_back(std::move(e));
  }
  return hermite_basis(gens, ambient_rank);
}

std::optional<IntVector> Sublattice::coordinates(const IntVector &v) const {
  if (v.size() != ambient_rank_)
    throw std::invalid_argument("Sublattice: vector length " + std::to_string(v.size()) +
                                " does not match ambient rank " + std::to_string(ambient_rank_));
  IntVector rest = v;
  IntVector coords(basis_.size());
  for (size_t k = 0; k < basis_.size(); ++k) {
    size_t c = leading_column(basis_[k]);
    // Columns before c are already zero in rest (echelon order).
    if (rest[c] % basis_[k][c] != 0)
      return std::nullopt;
    coords[k] = rest[c] / basis_[k][c];
    if (coords[k] != 0)
      for (size_t j = c; j < ambient_rank_; ++j)
        rest[j] -= coords[k] * basis_[k][j];
  }
  if (!is_zero(rest))
    return std::nullopt;
  return coords;
}

bool Sublattice::contains(const IntVector &v) const { return coordinates(v).has_value(); }

Sublattice hermite_basis(const std::vector<IntVector> &generators, size_t ambient_rank) {
  for (size_t i = 0; i < generators.size(); ++i)
    if (generators[i].size() != ambient_rank)
      throw std::invalid_argument("hermite_basis: generator " + std::to_string(i) +
                                  " has length " + std::to_string(generators[i].size()) +
                                  ", expected " + std::to_string(ambient_rank));
  Sublattice out;
  out.ambient_rank_ = ambient_rank;
  out.basis_ = row_hermite(generators, ambient_rank);
  return out;
}

std::vector<BigInt> SmithForm::diagonal() const {
  std::vector<BigInt> out;
  for (size_t i = 0; i < rank; ++i)
    out.push_back(d(i, i));
  return out;
}

SmithForm smith_form(const IntegerMatrix &a) {
  const size_t m = a.rows();
  const size_t n = a.cols();
  SmithForm s{IntegerMatrix::identity(m), a, IntegerMatrix::identity(n),
              IntegerMatrix::identity(n), 0};
  IntegerMatrix &d = s.d;

  // row_i += k·row_j
  auto add_row = [&](size_t i, size_t j, const BigInt &k) {
    for (size_t c = 0; c < n; ++c)
      d(i, c) += k * d(j, c);
    for (size_t c = 0; c < m; ++c)
      s.u(i, c) += k * s.u(j, c);
  };
  // col_i += k·col_j; V ← V·E, V^{-1} ← E^{-1}·V^{-1}
  auto add_col = [&](size_t i, size_t j, const BigInt &k) {
    for (size_t r = 0; r < m; ++r)
      d(r, i) += k * d(r, j);
    for (size_t r = 0; r < n; ++r)
      s.v(r, i) += k * s.v(r, j);
    for (size_t c = 0; c < n; ++c)
      s.v_inverse(j, c) -= k * s.v_inverse(i, c);
  };
  auto swap_row = [&](size_t i, size_t j) {
    d.swap_rows(i, j);
    s.u.swap_rows(i, j);
  };
  auto swap_col = [&](size_t i, size_t j) {
    d.swap_cols(i, j);
    s.v.swap_cols(i, j);
    s.v_inverse.swap_rows(i, j);
  };

  size_t t = 0;
  while (t < std::min(m, n)) {
    size_t bi = m, bj = n;
    for (size_t i = t; i < m; ++i)
      for (size_t j = t; j < n; ++j)
        if (d(i, j) != 0 && (bi == m || abs(d(i, j)) < abs(d(bi, bj)))) {
          bi = i;
          bj = j;
        }
    if (bi == m)
      break;
    swap_row(t, bi);
    swap_col(t, bj);
    for (;;) {
      bool done = true;
      for (size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0)
          continue;
        BigInt q = d(i, t) / d(t, t);
        if (q != 0)
          add_row(i, t, -q);
        if (d(i, t) != 0)
          done = false;
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0)
          continue;
        BigInt q = d(t, j) / d(t, t);
        if (q != 0)
          add_col(j, t, -q);
        if (d(t, j) != 0)
          done = false;
      }
      if (!done) {
        // Bring the smallest remaining entry of row/column t to the pivot.
        size_t pi = t, pj = t;
        for (size_t i = t + 1; i < m; ++i)
          if (d(i, t) != 0 && abs(d(i, t)) < abs(d(pi, pj))) {
            pi = i;
            pj = t;
          }
        for (size_t j = t + 1; j < n; ++j)
          if (d(t, j) != 0 && abs(d(t, j)) < abs(d(pi, pj))) {
            pi = t;
            pj = j;
          }
        swap_row(t, pi);
        swap_col(t, pj);
        continue;
      }
      // Divisibility condition d_t | every remaining entry.
      bool divisible = true;
      for (size_t i = t + 1; i < m && divisible; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            add_row(t, i, BigInt(1));
            divisible = false;
            break;
          }
      if (divisible)
        break;
    }
    if (d(t, t) < 0) {
      for (size_t c = 0; c < n; ++c)
        d(t, c) = -d(t, c);
      for (size_t c = 0; c < m; ++c)
        s.u(t, c) = -s.u(t, c);
    }
    ++t;
  }
  s.rank = t;
  return s;
}

BigInt lattice_index(const Sublattice &a, const Sublattice &b) {
  if (a.ambient_rank() != b.ambient_rank())
    throw std::invalid_argument("lattice_index: ambient ranks differ");
  if (a.rank() != b.rank())
    throw std::invalid_argument("lattice_index: rank " + std::to_string(b.rank()) +
                                " sublattice has infinite index in rank " +
                                std::to_string(a.rank()) + " lattice");
  const size_t k = a.rank();
  if (k == 0)
    return 1;
  IntegerMatrix coords(k, k);
  for (size_t i = 0; i < k; ++i) {
    auto c = a.coordinates(b.basis()[i]);
    if (!c)
      throw std::invalid_argument("lattice_index: " + to_string(b.basis()[i]) +
                                  " is not in the containing lattice");
    for (size_t j = 0; j < k; ++j)
      coords(i, j) = (*c)[j];
  }
  auto snf = smith_form(coords);
  if (snf.rank != k)
    throw std::invalid_argument("lattice_index: sublattice is not of full rank");
  BigInt idx = 1;
  for (const auto &x : snf.diagonal())
    idx *= x;
  return idx;
}

Sublattice saturation(const Sublattice &l) {
  const size_t r = l.ambient_rank();
  if (l.rank() == 0)
    return l;
  auto snf = smith_form(IntegerMatrix::from_rows(l.basis(), r));
  std::vector<IntVector> rows;
  for (size_t i = 0; i < snf.rank; ++i)
    rows.push_back(snf.v_inverse.row(i));
  return hermite_basis(rows, r);
}

Sublattice integer_kernel(const std::vector<IntVector> &rows, size_t cols) {
  if (rows.empty())
    return Sublattice::full(cols);
  auto snf = smith_form(IntegerMatrix::from_rows(rows, cols));
  std::vector<IntVector> basis;
  for (size_t j = snf.rank; j < cols; ++j)
    basis.push_back(snf.v.column(j));
  return hermite_basis(basis, cols);
}

Sublattice lattice_of_span(const RatMatrix &vectors, size_t ambient_rank) {
  std::vector<IntVector> gens;
  for (const auto &v : vectors) {
    if (v.size() != ambient_rank)
      throw std::invalid_argument("lattice_of_span: vector length mismatch");
    if (!is_zero(v))
      gens.push_back(primitive_integer_multiple(v));
  }
  return saturation(hermite_basis(gens, ambient_rank));
}

QuotientMap::QuotientMap(const Sublattice &tau)
    : ambient_rank_(tau.ambient_rank()), tau_rank_(tau.rank()) {
  if (tau.rank() == 0) {
    v_ = IntegerMatrix::identity(ambient_rank_);
    complement_ = v_.row_vectors();
    return;
  }
  auto snf = smith_form(IntegerMatrix::from_rows(tau.basis(), ambient_rank_));
  v_ = snf.v;
  for (size_t i = snf.rank; i < ambient_rank_; ++i)
    complement_.push_back(snf.v_inverse.row(i));
}

RatVector QuotientMap::coordinates(const RatVector &x) const {
  if (x.size() != ambient_rank_)
    throw std::invalid_argument("QuotientMap: vector length mismatch");
  RatVector out(complement_.size());
  for (size_t k = 0; k < complement_.size(); ++k) {
    const size_t col = tau_rank_ + k;
    for (size_t i = 0; i < ambient_rank_; ++i)
      if (v_(i, col) != 0 && x[i] != 0)
        out[k] += x[i] * Rational(v_(i, col));
  }
  return out;
}

IntVector QuotientMap::coordinates(const IntVector &x) const {
  if (x.size() != ambient_rank_)
    throw std::invalid_argument("QuotientMap: vector length mismatch");
  IntVector out(complement_.size());
  for (size_t k = 0; k < complement_.size(); ++k) {
    const size_t col = tau_rank_ + k;
    for (size_t i = 0; i < ambient_rank_; ++i)
      out[k] += x[i] * v_(i, col);
  }
  return out;
}

IntVector QuotientMap::lift(const IntVector &coords) const {
  IntVector w(ambient_rank_);
  for (size_t k = 0; k < complement_.size(); ++k)
    if (coords.at(k) != 0)
      for (size_t j = 0; j < ambient_rank_; ++j)
        w[j] += coords[k] * complement_[k][j];
  return w;
}

IntVector primitive_quotient_vector(const IntVector &v, const Sublattice &tau) {
  if (v.size() != tau.ambient_rank())
    throw std::invalid_argument("primitive_quotient_vector: vector length mismatch");
  QuotientMap q(tau);
  IntVector c = q.coordinates(v);
  BigInt g = content(c);
  if (g == 0)
    throw std::invalid_argument("primitive_quotient_vector: " + to_string(v) +
                                " lies in the span of the sublattice");
  for (auto &x : c)
    x /= g;
  return q.lift(c);
}

} // namespace tropcert
