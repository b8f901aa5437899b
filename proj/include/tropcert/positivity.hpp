#pragma once

#include "tropcert/cycles.hpp"
#include "tropcert/region.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tropcert {

using IndexSet = std::vector<size_t>; // strictly increasing, 0-based

/// A constant-coefficient (p,q)-superform Σ c_{I,J} d'x_I ∧ d''x_J on R^r.
class SuperformPoint {
public:
  SuperformPoint() = default;
  SuperformPoint(size_t r, size_t p, size_t q);

  /// The constant function c as a (0,0)-form.
  static SuperformPoint scalar(size_t r, const Rational &c);
  /// Symmetric (p,p)-form with coefficient matrix m over p-subsets in
  /// lexicographic order.
  static SuperformPoint from_matrix(size_t r, size_t p, const RatMatrix &m);
  static SuperformPoint elementary(size_t r, const IndexSet &i, const IndexSet &j, const Rational &c = 1);
  /// d'x_0 ∧ d''x_0 ∧ ... ∧ d'x_{r-1} ∧ d''x_{r-1}.
  static SuperformPoint volume(size_t r);

  size_t rank() const { return r_; }
  size_t p() const { return p_; }
  size_t q() const { return q_; }
  /// Nonzero coefficients only.
  const std::map<std::pair<IndexSet, IndexSet>, Rational> &coefficients() const { return coeffs_; }
  Rational coefficient(const IndexSet &i, const IndexSet &j) const;
  /// Throws std::invalid_argument on a bad index set.
  void add(const IndexSet &i, const IndexSet &j, const Rational &c);

  bool is_zero() const { return coeffs_.empty(); }
  bool is_symmetric() const;
  /// The involution swapping d'x_i and d''x_i.
  SuperformPoint involution() const;
  /// Coefficient of the volume form for an (r,r)-form.
  Rational volume_coefficient() const;
  /// Pullback along y = C^T z, where row j of C gives the j-th new basis
  /// vector in the old coordinates; the result has rank C.rows().
  SuperformPoint pullback(const IntegerMatrix &c) const;

  SuperformPoint operator+(const SuperformPoint &o) const;
  SuperformPoint operator*(const Rational &s) const;
  bool operator==(const SuperformPoint &) const = default;

private:
  size_t r_ = 0, p_ = 0, q_ = 0;
  std::map<std::pair<IndexSet, IndexSet>, Rational> coeffs_;
};

SuperformPoint wedge(const SuperformPoint &a, const SuperformPoint &b);

/// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<IndexSet> subsets(size_t n, size_t k);

/// The symmetric matrix of β ↦ (-1)^{k(k-1)/2} α ∧ β ∧ Jβ / vol on
/// (k,0)-forms β, k = r - p, indexed by subsets(r, k).
RatMatrix positivity_gram(const SuperformPoint &alpha);

struct PsdResult {
  bool psd = true;
  RatVector witness; // xᵀ G x < 0 when not psd
};

/// Exact test by symmetric pivoted LDLᵀ over Q.
PsdResult psd_test(const RatMatrix &g);

enum class Tri { Yes, No, Unknown };
std::string to_string(Tri t);

struct PositivityOptions {
  uint64_t seed = 0;
  size_t samples = 200;
};

struct PositivityVerdict {
  Tri verdict = Tri::Yes;
  std::string method;
  /// (1,0)-forms α_1, ... whose defining wedge is negative (weak, no).
  std::vector<RatVector> gammas;
  /// (k,0)-form β over subsets(r, k) with negative Gram value (positive, no).
  RatVector beta;
  /// Value of the violated inequality, or the combination size for an LP yes.
  Rational value;
};

/// Throws std::invalid_argument unless alpha is a symmetric (p,p)-form.
PositivityVerdict positivity_report(const SuperformPoint &alpha);
inline bool is_positive(const SuperformPoint &alpha) { return positivity_report(alpha).verdict == Tri::Yes; }
PositivityVerdict is_weakly_positive(const SuperformPoint &alpha, const PositivityOptions &opts = {});
PositivityVerdict is_strongly_positive(const SuperformPoint &alpha, const PositivityOptions &opts = {});

/// Whether p ∈ {0, 1, r-1, r}, where the three cones coincide.
bool is_exact_degree(size_t r, size_t p);

/// A δ-preform Σ α_Δ ∧ δ_Δ: a form on each support cell of the carrier, in
/// the coordinates of the cell's stored lattice basis. The effective form on
/// a cell is its weight times the attached form.
class FacewiseForm {
public:
  /// Throws std::invalid_argument when a form is missing, has the wrong rank,
  /// or the bidegrees differ.
  static FacewiseForm make(TropicalCycle carrier, std::map<size_t, SuperformPoint> forms, size_t p, size_t q);
  /// δ_C: the unit 0-form on every cell.
  static FacewiseForm current_of(const TropicalCycle &carrier);
  /// An ambient form on R^r with weight 1.
  static FacewiseForm ambient(const SuperformPoint &form);

  const TropicalCycle &carrier() const { return carrier_; }
  const std::map<size_t, SuperformPoint> &forms() const { return forms_; }
  size_t p() const { return p_; }
  size_t q() const { return q_; }
  /// weight · form on a support cell.
  SuperformPoint effective_form(size_t cell) const;

private:
  TropicalCycle carrier_;
  std::map<size_t, SuperformPoint> forms_;
  size_t p_ = 0, q_ = 0;
};

enum class PositivityMode { Weak, Positive, Strong };

struct PreformVerdict {
  Tri verdict = Tri::Yes;
  size_t cell = npos; // first cell with a non-yes verdict
  PositivityVerdict detail;
};

PreformVerdict preform_is_positive(const FacewiseForm &a, const OpenRegion &omega, PositivityMode mode,
                                   const PositivityOptions &opts = {});

/// Product of preforms over the stable intersection of the carriers. Throws
/// std::invalid_argument on a dimension violation.
FacewiseForm wedge(const FacewiseForm &a, const FacewiseForm &b,
                   const std::optional<RatVector> &v = std::nullopt);

} // namespace tropcert
