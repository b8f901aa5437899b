#pragma once

#include "tropcert/cycles.hpp"

#include <map>
#include <optional>
#include <vector>

namespace tropcert {

/// x ↦ ⟨linear, x⟩ + constant.
struct AffinePiece {
  RatVector linear;
  Rational constant;

  Rational operator()(const RatVector &x) const { return dot(linear, x) + constant; }
  AffinePiece operator+(const AffinePiece &o) const { return {linear + o.linear, constant + o.constant}; }
  AffinePiece scaled(const Rational &s) const { return {s * linear, s * constant}; }
  bool operator==(const AffinePiece &) const = default;
};

/// A continuous function on the support of a cycle that is affine on each top
/// cell of a subdivision of the cycle's complex. Linear parts are stored
/// canonically: the representative lying in the linear space of the cell, with
/// the constant adjusted so the function is unchanged on the cell.
class PLFunction {
public:
  /// `pieces` is keyed by top-cell id of `subdivision`. Throws
  /// std::invalid_argument when the subdivision does not carry the base, a
  /// piece is missing or has the wrong length, or continuity fails.
  static PLFunction make(const TropicalCycle &base, const PolyComplex &subdivision,
                         const std::map<size_t, AffinePiece> &pieces);
  /// Subdivision generated by the given top cells.
  static PLFunction from_pieces(const TropicalCycle &base,
                                const std::vector<std::pair<Polyhedron, AffinePiece>> &pieces);
  static PLFunction affine(const TropicalCycle &base, const AffinePiece &piece);
  /// max_i terms_i restricted to the support of base.
  static PLFunction max_of(const TropicalCycle &base, const std::vector<AffinePiece> &terms);
  /// Restriction of a function on R^r to the support of base.
  static PLFunction restrict_to(const PLFunction &ambient, const TropicalCycle &base);

  const TropicalCycle &base() const { return base_; }
  /// The base cycle carried by the subdivision.
  const TropicalCycle &cycle() const { return cycle_; }
  const PolyComplex &subdivision() const { return cycle_.complex(); }
  size_t ambient_rank() const { return base_.ambient_rank(); }
  size_t dim() const { return base_.dim(); }

  const std::map<size_t, AffinePiece> &pieces() const { return pieces_; }
  const AffinePiece &piece(size_t top_cell) const;
  /// Piece of some top cell containing the given point; throws when the
  /// point is outside the support.
  const AffinePiece &piece_at(const RatVector &x) const;
  Rational operator()(const RatVector &x) const { return piece_at(x)(x); }

  PLFunction refined_along(const std::vector<Hyperplane> &hyperplanes) const;

private:
  TropicalCycle base_;
  TropicalCycle cycle_;
  std::map<size_t, AffinePiece> pieces_;
};

/// The affine piece re-expressed with its linear part in the linear space of
/// the polyhedron; equal on the polyhedron.
AffinePiece canonical_piece(const AffinePiece &piece, const Polyhedron &cell);

/// Requires matching bases (as weighted sets).
PLFunction operator+(const PLFunction &a, const PLFunction &b);
PLFunction scale(const PLFunction &f, const Rational &s);
PLFunction add_affine(const PLFunction &f, const AffinePiece &piece);

/// Tropical Weil divisor of phi on its base. Throws std::invalid_argument
/// when the base is not balanced or is 0-dimensional.
TropicalCycle corner_locus(const PLFunction &phi);

struct ConvexityReport {
  bool convex = true;
  size_t wall = npos; // cell id in phi.subdivision()
  Rational jump;
};

enum class RegionMode { Strict, Lenient };

/// Wall test for phi restricted to the top cell `sigma` of phi.base(), on the
/// part of sigma inside omega. In strict mode more than one clause of omega
/// meeting sigma is an error (the intersection need not be convex); in
/// lenient mode each clause is tested separately.
ConvexityReport convexity_on_face(const PLFunction &phi, size_t sigma, const OpenRegion &omega,
                                  RegionMode mode = RegionMode::Strict);
inline bool is_convex_on_face(const PLFunction &phi, size_t sigma, const OpenRegion &omega,
                              RegionMode mode = RegionMode::Strict) {
  return convexity_on_face(phi, sigma, omega, mode).convex;
}

/// Wall test on all walls for a function on R^r (base weight 1). Throws
/// std::invalid_argument when the base is not the ambient cycle.
ConvexityReport convexity_global(const PLFunction &phi);
inline bool is_convex_global(const PLFunction &phi) { return convexity_global(phi).convex; }

} // namespace tropcert
