#include "tropcert/certifier.hpp"

#include <stdexcept>

namespace tropcert {

TropicalChart TropicalChart::make(const PLFunction &phi, OpenRegion omega, std::optional<PLFunction> extension,
                                  std::map<std::string, std::string> metadata) {
  const size_t r = phi.ambient_rank();
  if (omega.ambient_rank != r)
    throw std::invalid_argument("chart: region has rank " + std::to_string(omega.ambient_rank) +
                                ", function has rank " + std::to_string(r));
  if (extension) {
    if (extension->ambient_rank() != r)
      throw std::invalid_argument("chart: extension has the wrong ambient rank");
    if (!same_cycle(extension->base(), TropicalCycle::ambient(r)))
      throw std::invalid_argument("chart: extension must be a function on all of R^" + std::to_string(r));
  }
  return {phi.base(), std::move(omega), phi, std::move(extension), std::move(metadata)};
}

std::string to_string(PshStatus s) {
  switch (s) {
  case PshStatus::Psh:
    return "psh";
  case PshStatus::NotPsh:
    return "not_psh";
  default:
    return "unknown";
  }
}

Verdict certify_psh(const TropicalChart &chart, const CertifyOptions &opts) {
  Verdict out;
  const auto &phi = chart.phi;
  const auto &base = phi.base();
  for (size_t sigma : base.support_cells()) {
    const auto &cell = base.complex().cell(sigma);
    if (!cell_meets_region(cell, chart.omega))
      continue;
    auto clauses = clauses_meeting(cell, chart.omega);
    if (clauses.size() > 1 && opts.mode == RegionMode::Lenient) {
      std::string list;
      for (size_t c : clauses)
        list += (list.empty() ? "" : ", ") + std::to_string(c);
      out.notes.push_back("face " + std::to_string(sigma) + " meets clauses {" + list + "}, checked separately");
    }
    auto rep = convexity_on_face(phi, sigma, chart.omega, opts.mode);
    if (!rep.convex)
      out.witnesses.push_back(
          {"convexity", rep.wall, "subdivision", rep.jump, phi.subdivision().cell(rep.wall).interior_point()});
  }
  auto cl = corner_locus(phi);
  for (size_t id : cl.support_cells()) {
    const auto &cell = cl.complex().cell(id);
    if (cl.weight(id) < 0 && cell_meets_region(cell, chart.omega))
      out.witnesses.push_back({"effectivity", id, "corner-locus", cl.weight(id), cell.interior_point()});
  }
  if (!out.witnesses.empty())
    out.status = PshStatus::NotPsh;
  return out;
}

Verdict certify_psh_strong(const TropicalChart &chart, const CertifyOptions &opts) {
  if (!chart.extension)
    throw std::invalid_argument("psh-strong: the chart has no ambient extension");
  const auto &phi = chart.phi;
  const auto &base = phi.base();
  auto diff = PLFunction::restrict_to(*chart.extension, base) + scale(phi, -1);
  for (const auto &[id, piece] : diff.pieces()) {
    const auto &cell = diff.subdivision().cell(id);
    if (piece == AffinePiece{RatVector(phi.ambient_rank()), 0} || !cell_meets_region(cell, chart.omega))
      continue;
    throw std::invalid_argument("psh-strong: extension differs from the function near " +
                                to_string(cell.interior_point()));
  }
  Verdict out;
  out.notes.push_back("condition (i') holds on the subdivision of the function, where it is affine");
  auto ambient = corner_locus(*chart.extension);
  auto preform = FacewiseForm::current_of(ambient);
  for (size_t id : ambient.support_cells()) {
    const auto &cell = ambient.complex().cell(id);
    bool near = false;
    for (size_t sigma : base.support_cells()) {
      auto meet = cell.intersect(base.complex().cell(sigma));
      if (meet && cell_meets_region(*meet, chart.omega)) {
        near = true;
        break;
      }
    }
    if (!near)
      continue;
    auto v = is_strongly_positive(preform.effective_form(id), opts.positivity);
    if (v.verdict == Tri::No)
      out.witnesses.push_back(
          {"extension-positivity", id, "ambient-corner-locus", ambient.weight(id), cell.interior_point()});
    else if (v.verdict == Tri::Unknown && out.status == PshStatus::Psh)
      out.status = PshStatus::Unknown;
  }
  if (!out.witnesses.empty())
    out.status = PshStatus::NotPsh;
  return out;
}

GraphReport graph_slope_check(const TropicalChart &chart) {
  if (chart.phi.dim() != 1)
    throw std::invalid_argument("graph-ma: the cycle has dimension " + std::to_string(chart.phi.dim()) +
                                ", expected 1");
  GraphReport out;
  auto cl = corner_locus(chart.phi);
  for (size_t id : cl.support_cells()) {
    const auto &p = cl.complex().cell(id).interior_point();
    out.measure.points.push_back(p);
    out.measure.masses.push_back(cl.weight(id));
    if (cl.weight(id) < 0 && chart.omega.contains(p))
      out.verdict.witnesses.push_back({"slope-sum", id, "corner-locus", cl.weight(id), p});
  }
  if (!out.verdict.witnesses.empty())
    out.verdict.status = PshStatus::NotPsh;
  return out;
}

Verdict toric_check(const PLFunction &phi) {
  auto rep = convexity_global(phi);
  Verdict out;
  if (!rep.convex) {
    out.status = PshStatus::NotPsh;
    out.witnesses.push_back(
        {"convexity", rep.wall, "subdivision", rep.jump, phi.subdivision().cell(rep.wall).interior_point()});
  }
  return out;
}

} // namespace tropcert
