#pragma once

#include "tropcert/polyhedron.hpp"

#include <optional>
#include <vector>

namespace tropcert {

/// A finite union of relatively open polyhedral pieces. Each clause is a
/// conjunction of ≥ / > / = constraints; the region is the union of the
/// clause solution sets. No clauses means the empty region.
struct OpenRegion {
  size_t ambient_rank = 0;
  std::vector<std::vector<Constraint>> clauses;

  static OpenRegion everything(size_t ambient_rank);
  /// Open box ∏ (lo_i, hi_i).
  static OpenRegion open_box(const RatVector &lo, const RatVector &hi);

  bool contains(const RatVector &x) const;
  /// Indices of clauses that are feasible on their own.
  std::vector<size_t> nonempty_clauses() const;
};

/// Some point of p that lies in the region, if any; strict rows stay strict.
std::optional<RatVector> region_witness(const Polyhedron &p, const OpenRegion &omega);

inline bool cell_meets_region(const Polyhedron &p, const OpenRegion &omega) {
  return region_witness(p, omega).has_value();
}

/// Indices of the clauses of omega that meet p.
std::vector<size_t> clauses_meeting(const Polyhedron &p, const OpenRegion &omega);

} // namespace tropcert
