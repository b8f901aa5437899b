#pragma once

#include "tropcert/rational.hpp"

#include <optional>
#include <vector>

namespace tropcert {

enum class Relation { GreaterEqual, Greater, Equal };

/// ⟨a, x⟩ rel b
struct Constraint {
  RatVector a;
  Rational b;
  Relation rel = Relation::GreaterEqual;

  bool satisfied_by(const RatVector &x) const;
};

Constraint greater_equal(RatVector a, Rational b);
Constraint greater(RatVector a, Rational b);
Constraint equal(RatVector a, Rational b);
/// ⟨a, x⟩ ≤ b and ⟨a, x⟩ < b, stored as negated ≥ / > rows.
Constraint less_equal(RatVector a, Rational b);
Constraint less(RatVector a, Rational b);

/// Exact feasibility over Q^dim, strict rows included. Returns a witness
/// satisfying every constraint exactly, or nullopt when the system is
/// infeasible. The empty system is feasible with witness 0.
///
/// Strict rows are handled without an epsilon: maximize t subject to
/// ⟨a,x⟩ - t ≥ b on strict rows and t ≤ 1; the system is feasible iff the
/// optimum is positive.
std::optional<RatVector> lp_feasible(const std::vector<Constraint> &constraints, size_t dim);

inline bool is_feasible(const std::vector<Constraint> &constraints, size_t dim) {
  return lp_feasible(constraints, dim).has_value();
}

/// Some x ≥ 0 in Q^dim with a x = b (rows of a have length dim), or nullopt.
std::optional<RatVector> nonnegative_solution(const std::vector<RatVector> &a, const RatVector &b, size_t dim);

} // namespace tropcert
