#pragma once

#include "tropcert/plfunc.hpp"
#include "tropcert/positivity.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tropcert {

/// A tropical chart: a cycle standing for Trop(U), an open region of it and
/// a PL potential on the cycle, optionally with a PL extension to R^r.
/// Analytic data appear only as free-text metadata.
struct TropicalChart {
  TropicalCycle cycle;
  OpenRegion omega;
  PLFunction phi;
  std::optional<PLFunction> extension;
  std::map<std::string, std::string> metadata;

  /// Throws std::invalid_argument when phi does not live on the cycle, the
  /// ranks disagree, or the extension is not a function on R^r.
  static TropicalChart make(const PLFunction &phi, OpenRegion omega, std::optional<PLFunction> extension = std::nullopt,
                            std::map<std::string, std::string> metadata = {});
};

enum class PshStatus { Psh, NotPsh, Unknown };
std::string to_string(PshStatus s);

struct Witness {
  std::string condition; // "convexity", "effectivity", "extension-positivity", "slope-sum"
  size_t cell = npos;    // id in the complex named by `complex`
  std::string complex;   // "subdivision", "corner-locus", "ambient-corner-locus"
  Rational value;
  RatVector point;       // relative interior point of the cell
};

struct Verdict {
  PshStatus status = PshStatus::Psh;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;
};

struct CertifyOptions {
  RegionMode mode = RegionMode::Strict;
  PositivityOptions positivity;
};

/// Convexity on every maximal face meeting omega and effectivity of the
/// corner locus on omega. Strict mode throws std::invalid_argument when a
/// face meets several clauses of omega.
Verdict certify_psh(const TropicalChart &chart, const CertifyOptions &opts = {});

/// The stronger criterion through the ambient extension: its corner locus,
/// as a (1,1)-preform, is positive on the cells meeting omega. Throws
/// std::invalid_argument when the extension is missing or differs from phi
/// on omega.
Verdict certify_psh_strong(const TropicalChart &chart, const CertifyOptions &opts = {});

struct GraphMeasure {
  std::vector<RatVector> points;
  std::vector<Rational> masses;
};

struct GraphReport {
  Verdict verdict;
  GraphMeasure measure;
};

/// Outgoing-slope sums on a 1-dimensional chart. Throws
/// std::invalid_argument for other dimensions.
GraphReport graph_slope_check(const TropicalChart &chart);

/// Semipositivity of a toric metric: global convexity of phi on R^r. Throws
/// std::invalid_argument unless phi lives on R^r with weight 1.
Verdict toric_check(const PLFunction &phi);

} // namespace tropcert
