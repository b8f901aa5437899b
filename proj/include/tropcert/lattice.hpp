#pragma once

#include "tropcert/linalg.hpp"

#include <vector>

namespace tropcert {

/// A sublattice of Z^r, stored by its row Hermite normal form basis: rows in
/// echelon order, positive pivots, entries above each pivot reduced into
/// [0, pivot). Two sublattices are equal iff their stored bases are equal.
class Sublattice {
public:
  Sublattice() = default;
  /// The full lattice Z^r.
  static Sublattice full(size_t ambient_rank);

  size_t ambient_rank() const { return ambient_rank_; }
  size_t rank() const { return basis_.size(); }
  const std::vector<IntVector> &basis() const { return basis_; }

  bool contains(const IntVector &v) const;
  /// Integer coordinates of v in the stored basis, if v lies in the lattice.
  std::optional<IntVector> coordinates(const IntVector &v) const;

  bool operator==(const Sublattice &) const = default;

private:
  friend Sublattice hermite_basis(const std::vector<IntVector> &, size_t);
  size_t ambient_rank_ = 0;
  std::vector<IntVector> basis_;
};

/// Canonical basis of the Z-span of `generators` in Z^ambient_rank.
/// Throws std::invalid_argument on a vector of the wrong length.
Sublattice hermite_basis(const std::vector<IntVector> &generators, size_t ambient_rank);

/// U·A·V = D with U, V unimodular and D diagonal with d_1 | d_2 | ... , d_i > 0.
struct SmithForm {
  IntegerMatrix u;
  IntegerMatrix d;
  IntegerMatrix v;
  IntegerMatrix v_inverse;
  size_t rank = 0;
  std::vector<BigInt> diagonal() const;
};

SmithForm smith_form(const IntegerMatrix &a);

/// [A : B] for B ⊆ A of equal rank, as the product of the Smith invariants of
/// B written in a basis of A. Throws std::invalid_argument when B is not
/// contained in A or the ranks differ.
BigInt lattice_index(const Sublattice &a, const Sublattice &b);

/// L_R ∩ Z^r for the real span L_R of the lattice.
Sublattice saturation(const Sublattice &l);

/// Saturated lattice {x ∈ Z^cols : M x = 0}.
Sublattice integer_kernel(const std::vector<IntVector> &rows, size_t cols);

/// Lattice points of the rational linear span of `vectors`.
Sublattice lattice_of_span(const RatMatrix &vectors, size_t ambient_rank);

/// Coordinates on the free quotient Z^r / sat(tau) ≅ Z^(r - rank tau).
class QuotientMap {
public:
  explicit QuotientMap(const Sublattice &tau);

  size_t quotient_rank() const { return complement_.size(); }
  RatVector coordinates(const RatVector &v) const;
  IntVector coordinates(const IntVector &v) const;
  /// Integer vector whose quotient coordinates are `coords`.
  IntVector lift(const IntVector &coords) const;

private:
  size_t ambient_rank_;
  size_t tau_rank_;
  IntegerMatrix v_;                  // coordinates: c = x·V
  std::vector<IntVector> complement_; // rows of V^{-1} beyond the rank of tau
};

/// A vector w ≡ λ·v (mod sat(tau)) for some λ > 0 whose class generates the
/// ray through v's class in Z^r / sat(tau). Throws std::invalid_argument when
/// v lies in the span of tau.
IntVector primitive_quotient_vector(const IntVector &v, const Sublattice &tau);

} // namespace tropcert
