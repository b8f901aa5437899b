#pragma once

#include "tropcert/complex.hpp"
#include "tropcert/region.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace tropcert {

/// x ↦ A x + t with an integer matrix A.
struct AffineMap {
  IntegerMatrix matrix;
  RatVector translation;

  size_t source_rank() const { return matrix.cols(); }
  size_t target_rank() const { return matrix.rows(); }
  RatVector apply(const RatVector &x) const;

  static AffineMap identity(size_t r);
};

/// A pure-dimensional weighted complex with rational weights on its
/// top-dimensional cells. Cells without an entry in the weight table have
/// weight zero.
class TropicalCycle {
public:
  TropicalCycle() = default;

  /// Throws std::invalid_argument when a weight sits on a cell of the wrong
  /// dimension, a maximal cell has the wrong dimension, or (when
  /// check_balanced) the result is not balanced.
  static TropicalCycle make(PolyComplex complex, size_t dim, std::map<size_t, Rational> weights,
                            bool check_balanced = true);
  /// Builds the complex from weighted top cells; zero weights are dropped.
  static TropicalCycle from_cells(size_t ambient_rank, size_t dim,
                                  const std::vector<std::pair<Polyhedron, Rational>> &cells,
                                  bool check_balanced = true);
  /// R^r with a constant weight.
  static TropicalCycle ambient(size_t r, const Rational &weight = 1);
  static TropicalCycle empty(size_t r, size_t dim);

  size_t ambient_rank() const { return complex_.ambient_rank(); }
  size_t dim() const { return dim_; }
  const PolyComplex &complex() const { return complex_; }
  const std::map<size_t, Rational> &weights() const { return weights_; }
  Rational weight(size_t id) const;
  /// Top cells with nonzero weight.
  std::vector<size_t> support_cells() const;
  bool is_empty() const { return support_cells().empty(); }

  /// The same weighted set carried by a complex whose top cells refine this
  /// one's (weights transported through relative interior points).
  TropicalCycle transported_to(const PolyComplex &fine) const;
  TropicalCycle refined_along(const std::vector<Hyperplane> &hyperplanes) const;

private:
  PolyComplex complex_;
  size_t dim_ = 0;
  std::map<size_t, Rational> weights_;
};

/// Integer representative of the primitive generator of the ray spanned by
/// sigma in Z^r / N_tau, for a facet tau of sigma.
IntVector outgoing_vector(const Polyhedron &sigma, const Polyhedron &tau);

struct BalanceReport {
  bool balanced = true;
  size_t cell = npos;  // violating codimension-1 cell
  RatVector defect;     // nonzero weighted sum in quotient coordinates
};

BalanceReport balance_report(const TropicalCycle &c);
inline bool is_balanced(const TropicalCycle &c) { return balance_report(c).balanced; }

struct EffectivityReport {
  bool effective = true;
  size_t cell = npos; // a negative-weight cell meeting the region
  Rational weight;
};

EffectivityReport effectivity_report(const TropicalCycle &c, const OpenRegion &omega);
inline bool is_effective_on(const TropicalCycle &c, const OpenRegion &omega) {
  return effectivity_report(c, omega).effective;
}

/// Weighted cells, possibly overlapping, merged into a cycle: cells are cut by
/// the supporting hyperplanes of all cells and weights of equal pieces add.
TropicalCycle assemble_cycle(size_t ambient_rank, size_t dim,
                             const std::vector<std::pair<Polyhedron, Rational>> &cells);

TropicalCycle pushforward(const AffineMap &f, const TropicalCycle &c);

/// Whether v avoids every proper sum L_F + L_F' over faces F, F' of the
/// supports of the two cycles.
bool is_generic_displacement(const TropicalCycle &c1, const TropicalCycle &c2, const RatVector &v);
/// First moment-curve vector (1, t, t^2, ...) that is generic for the pair.
RatVector generic_displacement(const TropicalCycle &c1, const TropicalCycle &c2);

/// A contributing pair of the fan displacement rule: cell `first` of c1 and
/// cell `second` of c2 meet in `cell` with m·m'·[Z^r : N + N'].
struct IntersectionPiece {
  Polyhedron cell;
  size_t first;
  size_t second;
  Rational multiplicity;
  BigInt index;
};

/// The contributing pairs for the displacement vector v (checked generic).
std::vector<IntersectionPiece> stable_intersection_pieces(const TropicalCycle &c1, const TropicalCycle &c2,
                                                          const RatVector &v);

/// Fan displacement rule. Throws std::invalid_argument when the dimensions
/// add up to less than the ambient rank, the ranks differ, or a supplied v is
/// not generic.
TropicalCycle stable_intersection(const TropicalCycle &c1, const TropicalCycle &c2,
                                  const std::optional<RatVector> &v = std::nullopt);

/// Total weight of a 0-dimensional cycle.
Rational degree_zero_cycle(const TropicalCycle &c);

TropicalCycle operator+(const TropicalCycle &a, const TropicalCycle &b);
TropicalCycle operator*(const Rational &s, const TropicalCycle &c);
TropicalCycle operator-(const TropicalCycle &a, const TropicalCycle &b);
/// Equality as weighted sets (subdivision-independent).
bool same_cycle(const TropicalCycle &a, const TropicalCycle &b);

} // namespace tropcert
