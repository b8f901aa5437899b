#pragma once

#include "tropcert/lattice.hpp"
#include "tropcert/lp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tropcert {

/// ⟨normal, x⟩ ≥ offset (or = offset for equalities).
struct Halfspace {
  IntVector normal;
  Rational offset;
  bool operator==(const Halfspace &) const = default;
};

/// A nonempty integral R-affine H-polyhedron in canonical form.
///
/// Canonical form: the affine hull is given by primitive integer equations
/// derived from the reduced row echelon form (positive pivots); inequalities
/// are irredundant, contain no implicit equalities, have primitive integer
/// normals reduced modulo the equation space, and are sorted. Two
/// polyhedra are equal as sets iff their canonical forms are equal, so
/// `key()` identifies a polyhedron.
class Polyhedron {
public:
  /// Throws std::invalid_argument when the system is empty or has rows of the
  /// wrong length.
  static Polyhedron make(size_t ambient_rank, const std::vector<Constraint> &constraints);
  static std::optional<Polyhedron> try_make(size_t ambient_rank,
                                            const std::vector<Constraint> &constraints);
  static Polyhedron whole_space(size_t ambient_rank);
  static Polyhedron point(const RatVector &p);

  size_t ambient_rank() const { return ambient_rank_; }
  size_t dim() const { return ambient_rank_ - equalities_.size(); }
  bool is_bounded() const;

  const std::vector<Halfspace> &inequalities() const { return inequalities_; }
  const std::vector<Halfspace> &equalities() const { return equalities_; }
  /// A point in the relative interior.
  const RatVector &interior_point() const { return interior_point_; }
  const std::string &key() const { return key_; }

  std::vector<Constraint> constraints() const;

  bool contains(const RatVector &x) const;
  bool relint_contains(const RatVector &x) const;
  /// Set inclusion other ⊆ *this.
  bool contains(const Polyhedron &other) const;

  std::optional<Polyhedron> intersect(const Polyhedron &other) const;
  std::optional<Polyhedron> intersect(const std::vector<Constraint> &extra) const;

  /// Facets (codimension-1 faces); empty for an affine subspace.
  std::vector<Polyhedron> facets() const;
  /// All nonempty faces including the polyhedron itself, without duplicates.
  std::vector<Polyhedron> faces() const;

  /// N_Δ: the lattice Z^r ∩ L_Δ of the linear space parallel to the affine hull.
  Sublattice lattice() const;
  /// Rational basis of the linear space L_Δ (the lattice basis).
  RatMatrix linear_basis() const;

  /// Homogeneous constraints of the cone of feasible directions at a point of
  /// the polyhedron.
  std::vector<Constraint> tangent_cone(const RatVector &at) const;

  /// Image under x ↦ A x + t for an integer matrix A.
  Polyhedron image(const IntegerMatrix &a, const RatVector &t) const;

  bool operator==(const Polyhedron &other) const { return key_ == other.key_; }
  bool operator<(const Polyhedron &other) const { return key_ < other.key_; }

  std::string describe() const;

private:
  size_t ambient_rank_ = 0;
  std::vector<Halfspace> inequalities_;
  std::vector<Halfspace> equalities_;
  RatVector interior_point_;
  std::string key_;
};

} // namespace tropcert
