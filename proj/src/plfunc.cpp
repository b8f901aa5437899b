#include "tropcert/plfunc.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace tropcert {

namespace {

struct WallSide {
  size_t cell;
  Rational weight;
};

/// Σ m_σ ℓ_σ(u_σ) − ℓ_τ(Σ m_σ u_σ) over the given sides of the wall τ;
/// nullopt when the weighted outgoing vectors do not sum into L_τ.
std::optional<Rational> wall_weight(const PLFunction &phi, size_t tau, const std::vector<WallSide> &sides) {
  const auto &cx = phi.subdivision();
  const auto &wall = cx.cell(tau);
  Rational total = 0;
  RatVector usum(phi.ambient_rank());
  const AffinePiece *adjacent = nullptr;
  for (const auto &[cell, w] : sides) {
    auto u = to_rational(outgoing_vector(cx.cell(cell), wall));
    const auto &piece = phi.piece(cell);
    total += w * dot(piece.linear, u);
    usum = usum + w * u;
    adjacent = &piece;
  }
  if (!adjacent)
    return Rational(0);
  RatMatrix span = wall.linear_basis();
  const size_t k = span.size();
  span.push_back(usum);
  if (rank(span, phi.ambient_rank()) != k)
    return std::nullopt;
  return total - dot(adjacent->linear, usum);
}

std::vector<WallSide> weighted_sides(const PLFunction &phi, size_t tau) {
  std::vector<WallSide> out;
  for (size_t s : phi.subdivision().cofacets(tau)) {
    auto w = phi.cycle().weight(s);
    if (w != 0)
      out.push_back({s, w});
  }
  return out;
}

ConvexityReport check_walls(const PLFunction &phi, const std::vector<size_t> &walls,
                            const std::function<std::vector<WallSide>(size_t)> &sides) {
  for (size_t tau : walls) {
    auto jump = wall_weight(phi, tau, sides(tau));
    if (!jump)
      throw std::invalid_argument("convexity: the sides of wall '" + phi.subdivision().label(tau) +
                                  "' are not balanced");
    if (*jump < 0)
      return {false, tau, *jump};
  }
  return {};
}

} // namespace

AffinePiece canonical_piece(const AffinePiece &piece, const Polyhedron &cell) {
  const size_t r = cell.ambient_rank();
  if (piece.linear.size() != r)
    throw std::invalid_argument("affine piece has length " + std::to_string(piece.linear.size()) +
                                ", expected " + std::to_string(r));
  RatMatrix basis = cell.linear_basis();
  const size_t k = basis.size();
  RatVector proj(r);
  if (k > 0) {
    // Gram system G c = B ℓ; the projection is Σ c_i b_i
    RatMatrix gram(k, RatVector(k + 1));
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < k; ++j)
        gram[i][j] = dot(basis[i], basis[j]);
      gram[i][k] = dot(basis[i], piece.linear);
    }
    auto ech = rref(gram, k + 1);
    for (size_t row = 0; row < ech.rows.size(); ++row)
      proj = proj + ech.rows[row][k] * basis[ech.pivots[row]];
  }
  Rational constant = piece.constant + dot(piece.linear - proj, cell.interior_point());
  return {proj, constant};
}

PLFunction PLFunction::make(const TropicalCycle &base, const PolyComplex &subdivision,
                            const std::map<size_t, AffinePiece> &pieces) {
  if (base.ambient_rank() != subdivision.ambient_rank())
    throw std::invalid_argument("PLFunction: subdivision and base differ in ambient rank");
  PLFunction f;
  f.base_ = base;
  f.cycle_ = base.transported_to(subdivision);
  auto prov = provenance(subdivision, base.complex());
  for (size_t id : subdivision.maximal_cells()) {
    if (prov[id] == npos || !base.complex().cell(prov[id]).contains(subdivision.cell(id)))
      throw std::invalid_argument("PLFunction: subdivision cell '" + subdivision.label(id) +
                                  "' does not lie in a cell of the base");
    auto it = pieces.find(id);
    if (it == pieces.end())
      throw std::invalid_argument("PLFunction: no affine piece on cell '" + subdivision.label(id) + "'");
    f.pieces_.emplace(id, canonical_piece(it->second, subdivision.cell(id)));
  }
  for (const auto &[id, p] : pieces)
    if (!f.pieces_.count(id))
      throw std::invalid_argument("PLFunction: affine piece on non-maximal cell " + std::to_string(id));
  if (!same_cycle(f.cycle_, base))
    throw std::invalid_argument("PLFunction: subdivision does not cover the base cycle");

  // continuity on every shared face
  std::map<size_t, std::vector<size_t>> containing;
  for (size_t id : subdivision.maximal_cells())
    for (size_t face : subdivision.faces_of(id))
      containing[face].push_back(id);
  for (const auto &[face, tops] : containing) {
    if (tops.size() < 2)
      continue;
    const auto &cell = subdivision.cell(face);
    std::vector<RatVector> probes{cell.interior_point()};
    for (const auto &b : cell.linear_basis())
      probes.push_back(cell.interior_point() + b);
    const auto &first = f.pieces_.at(tops[0]);
    for (size_t i = 1; i < tops.size(); ++i)
      for (const auto &x : probes)
        if (f.pieces_.at(tops[i])(x) != first(x))
          throw std::invalid_argument("PLFunction: pieces on '" + subdivision.label(tops[0]) + "' and '" +
                                      subdivision.label(tops[i]) + "' disagree on their common face '" +
                                      subdivision.label(face) + "'");
  }
  return f;
}

PLFunction PLFunction::from_pieces(const TropicalCycle &base,
                                   const std::vector<std::pair<Polyhedron, AffinePiece>> &pieces) {
  std::vector<Polyhedron> cells;
  for (const auto &[p, a] : pieces)
    cells.push_back(p);
  auto sub = PolyComplex::from_cells(base.ambient_rank(), cells);
  std::map<size_t, AffinePiece> keyed;
  for (const auto &[p, a] : pieces) {
    size_t id = *sub.find(p);
    auto canon = canonical_piece(a, p);
    auto [it, fresh] = keyed.emplace(id, canon);
    if (!fresh && !(it->second == canon))
      throw std::invalid_argument("PLFunction: two different pieces on the same cell");
  }
  return make(base, sub, keyed);
}

PLFunction PLFunction::affine(const TropicalCycle &base, const AffinePiece &piece) {
  std::map<size_t, AffinePiece> pieces;
  for (size_t id : base.complex().maximal_cells())
    pieces.emplace(id, piece);
  return make(base, base.complex(), pieces);
}

PLFunction PLFunction::max_of(const TropicalCycle &base, const std::vector<AffinePiece> &terms) {
  if (terms.empty())
    throw std::invalid_argument("max_of: no terms");
  std::vector<std::pair<Polyhedron, AffinePiece>> pieces;
  std::set<std::string> seen;
  for (size_t id : base.complex().maximal_cells()) {
    const auto &sigma = base.complex().cell(id);
    for (size_t i = 0; i < terms.size(); ++i) {
      std::vector<Constraint> dominates;
      for (size_t j = 0; j < terms.size(); ++j)
        if (j != i)
          dominates.push_back(greater_equal(terms[i].linear - terms[j].linear,
                                            terms[j].constant - terms[i].constant));
      auto region = sigma.intersect(dominates);
      if (!region || region->dim() != base.dim() || !seen.insert(region->key()).second)
        continue;
      pieces.emplace_back(std::move(*region), terms[i]);
    }
  }
  return from_pieces(base, pieces);
}

PLFunction PLFunction::restrict_to(const PLFunction &ambient, const TropicalCycle &base) {
  if (ambient.dim() != ambient.ambient_rank() || base.ambient_rank() != ambient.ambient_rank())
    throw std::invalid_argument("restrict_to: expects a function on the ambient space");
  auto common = common_refinement(ambient.subdivision(), base.complex());
  std::vector<std::pair<Polyhedron, AffinePiece>> pieces;
  for (size_t id : common.cells_of_dim(base.dim()))
    pieces.emplace_back(common.cell(id), ambient.piece_at(common.cell(id).interior_point()));
  return from_pieces(base, pieces);
}

const AffinePiece &PLFunction::piece(size_t top_cell) const {
  auto it = pieces_.find(top_cell);
  if (it == pieces_.end())
    throw std::invalid_argument("PLFunction: cell " + std::to_string(top_cell) + " is not a top cell");
  return it->second;
}

const AffinePiece &PLFunction::piece_at(const RatVector &x) const {
  for (const auto &[id, p] : pieces_)
    if (subdivision().cell(id).contains(x))
      return p;
  throw std::invalid_argument("PLFunction: point " + to_string(x) + " is outside the support");
}

PLFunction PLFunction::refined_along(const std::vector<Hyperplane> &hyperplanes) const {
  auto fine = subdivide_along(subdivision(), hyperplanes);
  std::map<size_t, AffinePiece> pieces;
  for (size_t id : fine.maximal_cells())
    pieces.emplace(id, piece_at(fine.cell(id).interior_point()));
  return make(base_, fine, pieces);
}

PLFunction operator+(const PLFunction &a, const PLFunction &b) {
  if (!same_cycle(a.base(), b.base()))
    throw std::invalid_argument("PLFunction sum: bases differ");
  auto common = common_refinement(a.subdivision(), b.subdivision());
  std::vector<std::pair<Polyhedron, AffinePiece>> pieces;
  for (size_t id : common.cells_of_dim(a.dim())) {
    const auto &ip = common.cell(id).interior_point();
    pieces.emplace_back(common.cell(id), a.piece_at(ip) + b.piece_at(ip));
  }
  return PLFunction::from_pieces(a.base(), pieces);
}

PLFunction scale(const PLFunction &f, const Rational &s) {
  std::map<size_t, AffinePiece> pieces;
  for (const auto &[id, p] : f.pieces())
    pieces.emplace(id, p.scaled(s));
  return PLFunction::make(f.base(), f.subdivision(), pieces);
}

PLFunction add_affine(const PLFunction &f, const AffinePiece &piece) {
  std::map<size_t, AffinePiece> pieces;
  for (const auto &[id, p] : f.pieces())
    pieces.emplace(id, p + piece);
  return PLFunction::make(f.base(), f.subdivision(), pieces);
}

TropicalCycle corner_locus(const PLFunction &phi) {
  if (phi.dim() == 0)
    throw std::invalid_argument("corner_locus: base cycle is 0-dimensional");
  auto bal = balance_report(phi.cycle());
  if (!bal.balanced)
    throw std::invalid_argument("corner_locus: base cycle is not balanced at '" +
                                phi.subdivision().label(bal.cell) + "'");
  std::vector<std::pair<Polyhedron, Rational>> cells;
  for (size_t tau : phi.subdivision().cells_of_dim(phi.dim() - 1)) {
    auto w = wall_weight(phi, tau, weighted_sides(phi, tau));
    if (!w)
      throw std::invalid_argument("corner_locus: base cycle is not balanced at '" +
                                  phi.subdivision().label(tau) + "'");
    if (*w != 0)
      cells.emplace_back(phi.subdivision().cell(tau), *w);
  }
  return TropicalCycle::from_cells(phi.ambient_rank(), phi.dim() - 1, cells, false);
}

ConvexityReport convexity_on_face(const PLFunction &phi, size_t sigma, const OpenRegion &omega,
                                  RegionMode mode) {
  const auto &base = phi.base().complex();
  if (sigma >= base.size() || base.cell(sigma).dim() != phi.dim())
    throw std::invalid_argument("convexity_on_face: cell " + std::to_string(sigma) + " is not a top cell");
  const auto &face = base.cell(sigma);
  auto clauses = clauses_meeting(face, omega);
  if (mode == RegionMode::Strict && clauses.size() > 1)
    throw std::invalid_argument("convexity_on_face: region meets cell '" + base.label(sigma) + "' in " +
                                std::to_string(clauses.size()) +
                                " clauses; the intersection need not be convex (use lenient mode)");
  const auto &sub = phi.subdivision();
  std::vector<size_t> interior_walls;
  for (size_t tau : sub.cells_of_dim(phi.dim() - 1))
    if (face.relint_contains(sub.cell(tau).interior_point()))
      interior_walls.push_back(tau);
  auto sides = [&](size_t tau) {
    std::vector<WallSide> out;
    for (size_t s : sub.cofacets(tau))
      if (face.contains(sub.cell(s)))
        out.push_back({s, Rational(1)});
    return out;
  };
  for (size_t c : clauses) {
    OpenRegion piece{omega.ambient_rank, {omega.clauses[c]}};
    std::vector<size_t> walls;
    for (size_t tau : interior_walls)
      if (cell_meets_region(sub.cell(tau), piece))
        walls.push_back(tau);
    auto rep = check_walls(phi, walls, sides);
    if (!rep.convex)
      return rep;
  }
  return {};
}

ConvexityReport convexity_global(const PLFunction &phi) {
  const size_t r = phi.ambient_rank();
  if (phi.dim() != r || !same_cycle(phi.base(), TropicalCycle::ambient(r)))
    throw std::invalid_argument("convexity_global: base is not R^" + std::to_string(r) + " with weight 1");
  return check_walls(phi, phi.subdivision().cells_of_dim(r - 1),
                     [&](size_t tau) { return weighted_sides(phi, tau); });
}

} // namespace tropcert
