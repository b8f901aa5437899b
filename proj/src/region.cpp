#include "tropcert/region.hpp"

#include <stdexcept>

namespace tropcert {

OpenRegion OpenRegion::everything(size_t ambient_rank) { return {ambient_rank, {{}}}; }

OpenRegion OpenRegion::open_box(const RatVector &lo, const RatVector &hi) {
  if (lo.size() != hi.size())
    throw std::invalid_argument("open_box: bound lengths differ");
  const size_t r = lo.size();
  std::vector<Constraint> clause;
  for (size_t i = 0; i < r; ++i) {
    RatVector e(r);
    e[i] = 1;
    clause.push_back(greater(e, lo[i]));
    clause.push_back(less(e, hi[i]));
  }
  return {r, {clause}};
}

bool OpenRegion::contains(const RatVector &x) const {
  for (const auto &clause : clauses) {
    bool all = true;
    for (const auto &c : clause)
      if (!c.satisfied_by(x)) {
        all = false;
        break;
      }
    if (all)
      return true;
  }
  return false;
}

std::vector<size_t> OpenRegion::nonempty_clauses() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < clauses.size(); ++i)
    if (is_feasible(clauses[i], ambient_rank))
      out.push_back(i);
  return out;
}

namespace {

std::optional<RatVector> clause_witness(const Polyhedron &p, const std::vector<Constraint> &clause) {
  auto cs = p.constraints();
  cs.insert(cs.end(), clause.begin(), clause.end());
  return lp_feasible(cs, p.ambient_rank());
}

} // namespace

std::optional<RatVector> region_witness(const Polyhedron &p, const OpenRegion &omega) {
  if (p.ambient_rank() != omega.ambient_rank)
    throw std::invalid_argument("cell_meets_region: ambient ranks differ");
  for (const auto &clause : omega.clauses)
    if (auto w = clause_witness(p, clause))
      return w;
  return std::nullopt;
}

std::vector<size_t> clauses_meeting(const Polyhedron &p, const OpenRegion &omega) {
  if (p.ambient_rank() != omega.ambient_rank)
    throw std::invalid_argument("clauses_meeting: ambient ranks differ");
  std::vector<size_t> out;
  for (size_t i = 0; i < omega.clauses.size(); ++i)
    if (clause_witness(p, omega.clauses[i]))
      out.push_back(i);
  return out;
}

} // namespace tropcert
