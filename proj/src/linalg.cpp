#include "tropcert/linalg.hpp"

#include <stdexcept>

namespace tropcert {

IntegerMatrix IntegerMatrix::from_rows(const std::vector<IntVector> &rows, size_t cols) {
  IntegerMatrix m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw std::invalid_argument("IntegerMatrix: row " + std::to_string(i) + " has length " +
                                  std::to_string(rows[i].size()) + ", expected " +
                                  std::to_string(cols));
    for (size_t j = 0; j < cols; ++j)
      m(i, j) = rows[i][j];
  }
  return m;
}

IntegerMatrix IntegerMatrix::identity(size_t n) {
  IntegerMatrix m(n, n);
  for (size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

IntVector IntegerMatrix::row(size_t i) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntegerMatrix::column(size_t j) const {
  IntVector out(rows_);
  for (size_t i = 0; i < rows_; ++i)
    out[i] = (*this)(i, j);
  return out;
}

std::vector<IntVector> IntegerMatrix::row_vectors() const {
  std::vector<IntVector> out;
  out.reserve(rows_);
  for (size_t i = 0; i < rows_; ++i)
    out.push_back(row(i));
  return out;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix &other) const {
  if (cols_ != other.rows_)
    throw std::invalid_argument("IntegerMatrix: dimension mismatch in product");
  IntegerMatrix out(rows_, other.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const BigInt &a = (*this)(i, k);
      if (a == 0)
        continue;
      for (size_t j = 0; j < other.cols_; ++j)
        out(i, j) += a * other(k, j);
    }
  return out;
}

RatVector IntegerMatrix::apply(const RatVector &v) const {
  if (v.size() != cols_)
    throw std::invalid_argument("IntegerMatrix::apply: length mismatch");
  RatVector out(rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0)
        out[i] += Rational((*this)(i, j)) * v[j];
  return out;
}

IntVector IntegerMatrix::apply(const IntVector &v) const {
  if (v.size() != cols_)
    throw std::invalid_argument("IntegerMatrix::apply: length mismatch");
  IntVector out(rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      out[i] += (*this)(i, j) * v[j];
  return out;
}

void IntegerMatrix::swap_rows(size_t a, size_t b) {
  if (a == b)
    return;
  for (size_t j = 0; j < cols_; ++j)
    std::swap((*this)(a, j), (*this)(b, j));
}

void IntegerMatrix::swap_cols(size_t a, size_t b) {
  if (a == b)
    return;
  for (size_t i = 0; i < rows_; ++i)
    std::swap((*this)(i, a), (*this)(i, b));
}

EchelonForm rref(RatMatrix m, size_t cols) {
  EchelonForm out;
  size_t lead = 0;
  for (size_t c = 0; c < cols && lead < m.size(); ++c) {
    size_t p = lead;
    while (p < m.size() && m[p][c] == 0)
      ++p;
    if (p == m.size())
      continue;
    std::swap(m[p], m[lead]);
    Rational inv = 1 / m[lead][c];
    for (auto &x : m[lead])
      x *= inv;
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == lead || m[i][c] == 0)
        continue;
      Rational f = m[i][c];
      for (size_t j = 0; j < m[i].size(); ++j)
        if (m[lead][j] != 0)
          m[i][j] -= f * m[lead][j];
    }
    out.pivots.push_back(c);
    ++lead;
  }
  m.resize(lead);
  out.rows = std::move(m);
  return out;
}

size_t rank(const RatMatrix &m, size_t cols) { return rref(m, cols).pivots.size(); }

size_t rank(const std::vector<IntVector> &m, size_t cols) {
  RatMatrix q;
  q.reserve(m.size());
  for (const auto &r : m)
    q.push_back(to_rational(r));
  return rank(q, cols);
}

Rational determinant(RatMatrix m) {
  const size_t n = m.size();
  Rational det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0)
      ++p;
    if (p == n)
      return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0)
        continue;
      Rational f = m[i][c] / m[c][c];
      for (size_t j = c; j < n; ++j)
        m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

std::optional<RatVector> solve_left(const RatMatrix &a, const RatVector &b) {
  // x·A = b  <=>  Aᵀ xᵀ = bᵀ; solve via rref of the augmented transpose.
  const size_t k = a.size();
  const size_t n = b.size();
  RatMatrix aug(n, RatVector(k + 1));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < k; ++j)
      aug[i][j] = a[j].at(i);
    aug[i][k] = b[i];
  }
  auto ech = rref(std::move(aug), k + 1);
  RatVector x(k);
  for (size_t r = 0; r < ech.rows.size(); ++r) {
    if (ech.pivots[r] == k)
      return std::nullopt;
    x[ech.pivots[r]] = ech.rows[r][k];
  }
  return x;
}

RatMatrix null_space(const RatMatrix &m, size_t cols) {
  auto ech = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : ech.pivots)
    is_pivot[p] = true;
  RatMatrix basis;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f])
      continue;
    RatVector v(cols);
    v[f] = 1;
    for (size_t r = 0; r < ech.rows.size(); ++r)
      v[ech.pivots[r]] = -ech.rows[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

} // namespace tropcert
