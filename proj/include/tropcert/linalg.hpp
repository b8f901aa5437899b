#pragma once

#include "tropcert/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace tropcert {

/// Dense row-major matrix of arbitrary-precision integers.
class IntegerMatrix {
public:
  IntegerMatrix() = default;
  IntegerMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// Builds a matrix from row vectors; all rows must have length `cols`.
  static IntegerMatrix from_rows(const std::vector<IntVector> &rows, size_t cols);
  static IntegerMatrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  BigInt &operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const BigInt &operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(size_t i) const;
  IntVector column(size_t j) const;
  std::vector<IntVector> row_vectors() const;

  IntegerMatrix transpose() const;
  IntegerMatrix operator*(const IntegerMatrix &other) const;
  /// Matrix-vector product M·v.
  RatVector apply(const RatVector &v) const;
  IntVector apply(const IntVector &v) const;

  void swap_rows(size_t a, size_t b);
  void swap_cols(size_t a, size_t b);

  bool operator==(const IntegerMatrix &) const = default;

private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<BigInt> data_;
};

using RatMatrix = std::vector<RatVector>;

/// Reduced row echelon form over Q.
struct EchelonForm {
  RatMatrix rows;             // nonzero rows only
  std::vector<size_t> pivots; // pivot column of each row
};

EchelonForm rref(RatMatrix m, size_t cols);
size_t rank(const RatMatrix &m, size_t cols);
size_t rank(const std::vector<IntVector> &m, size_t cols);

/// Determinant of a square rational matrix.
Rational determinant(RatMatrix m);

/// Solves x·A = b (x a row vector) when a solution exists. Rows of A need
/// not be independent; any solution is returned.
std::optional<RatVector> solve_left(const RatMatrix &a, const RatVector &b);

/// Basis (as rows) of the rational null space {x : M x = 0}.
RatMatrix null_space(const RatMatrix &m, size_t cols);

} // namespace tropcert
