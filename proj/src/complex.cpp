#include "tropcert/complex.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace tropcert {

PolyComplex PolyComplex::from_cells(size_t r, const std::vector<Polyhedron> &generators,
                                    const std::vector<std::string> &labels) {
  if (!labels.empty() && labels.size() != generators.size())
    throw std::invalid_argument("PolyComplex: label count does not match generator count");
  PolyComplex c;
  c.ambient_rank_ = r;

  auto add = [&](const Polyhedron &p) -> size_t {
    auto it = c.by_key_.find(p.key());
    if (it != c.by_key_.end())
      return it->second;
    size_t id = c.cells_.size();
    c.cells_.push_back(p);
    c.labels_.emplace_back();
    c.facets_.emplace_back();
    c.cofacets_.emplace_back();
    c.by_key_.emplace(p.key(), id);
    return id;
  };

  for (size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].ambient_rank() != r)
      throw std::invalid_argument("PolyComplex: cell " + std::to_string(i) +
                                  " has the wrong ambient rank");
    size_t id = add(generators[i]);
    if (!labels.empty()) {
      if (!c.labels_[id].empty() && c.labels_[id] != labels[i])
        throw std::invalid_argument("PolyComplex: cells '" + c.labels_[id] + "' and '" +
                                    labels[i] + "' are the same polyhedron");
      c.labels_[id] = labels[i];
    }
  }
  // Close under facets; facets of facets are reached through the queue.
  for (size_t id = 0; id < c.cells_.size(); ++id) {
    Polyhedron p = c.cells_[id];
    std::vector<size_t> fs;
    for (const auto &f : p.facets())
      fs.push_back(add(f));
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    c.facets_[id] = fs;
  }
  for (size_t id = 0; id < c.cells_.size(); ++id)
    for (size_t f : c.facets_[id])
      c.cofacets_[f].push_back(id);

  for (size_t id = 0; id < c.cells_.size(); ++id) {
    if (c.labels_[id].empty())
      c.labels_[id] = "_" + std::to_string(id);
    if (!c.by_label_.emplace(c.labels_[id], id).second)
      throw std::invalid_argument("PolyComplex: duplicate cell label '" + c.labels_[id] + "'");
  }
  return c;
}

void PolyComplex::validate() const {
  for (size_t i = 0; i < cells_.size(); ++i)
    for (size_t j = i + 1; j < cells_.size(); ++j) {
      auto meet = cells_[i].intersect(cells_[j]);
      if (!meet)
        continue;
      auto id = find(*meet);
      if (!id || !is_face_of(*id, i) || !is_face_of(*id, j))
        throw std::invalid_argument("PolyComplex: cells '" + labels_[i] + "' and '" + labels_[j] +
                                    "' do not meet in a common face");
    }
}

std::optional<size_t> PolyComplex::find(const Polyhedron &p) const {
  auto it = by_key_.find(p.key());
  if (it == by_key_.end())
    return std::nullopt;
  return it->second;
}

std::optional<size_t> PolyComplex::find_label(const std::string &label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end())
    return std::nullopt;
  return it->second;
}

std::vector<size_t> PolyComplex::faces_of(size_t id) const {
  std::vector<size_t> out{id};
  std::set<size_t> seen{id};
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t f : facets_.at(out[i]))
      if (seen.insert(f).second)
        out.push_back(f);
  return out;
}

bool PolyComplex::is_face_of(size_t face, size_t cell) const {
  if (cells_.at(face).dim() > cells_.at(cell).dim())
    return false;
  auto fs = faces_of(cell);
  return std::find(fs.begin(), fs.end(), face) != fs.end();
}

std::vector<size_t> PolyComplex::cells_of_dim(size_t d) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].dim() == d)
      out.push_back(i);
  return out;
}

std::vector<size_t> PolyComplex::maximal_cells() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < cells_.size(); ++i)
    if (cofacets_[i].empty())
      out.push_back(i);
  return out;
}

size_t PolyComplex::dim() const {
  size_t d = 0;
  for (const auto &c : cells_)
    d = std::max(d, c.dim());
  return d;
}

std::optional<size_t> PolyComplex::locate(const RatVector &x) const {
  for (size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].relint_contains(x))
      return i;
  return std::nullopt;
}

bool PolyComplex::same_cells(const PolyComplex &other) const {
  if (ambient_rank_ != other.ambient_rank_ || cells_.size() != other.cells_.size())
    return false;
  for (const auto &[key, id] : by_key_)
    if (!other.by_key_.count(key))
      return false;
  return true;
}

std::vector<size_t> provenance(const PolyComplex &fine, const PolyComplex &coarse) {
  std::vector<size_t> out(fine.size(), npos);
  for (size_t i = 0; i < fine.size(); ++i)
    if (auto id = coarse.locate(fine.cell(i).interior_point()))
      out[i] = *id;
  return out;
}

PolyComplex common_refinement(const PolyComplex &c1, const PolyComplex &c2) {
  if (c1.ambient_rank() != c2.ambient_rank())
    throw std::invalid_argument("common_refinement: ambient ranks differ");
  std::vector<Polyhedron> gens;
  for (size_t a : c1.maximal_cells())
    for (size_t b : c2.maximal_cells())
      if (auto meet = c1.cell(a).intersect(c2.cell(b)))
        gens.push_back(std::move(*meet));
  return PolyComplex::from_cells(c1.ambient_rank(), gens);
}

PolyComplex subdivide_along(const PolyComplex &c, const std::vector<Hyperplane> &hyperplanes) {
  const size_t r = c.ambient_rank();
  std::vector<Polyhedron> pieces;
  for (size_t id : c.maximal_cells()) {
    std::vector<Polyhedron> current{c.cell(id)};
    for (const auto &h : hyperplanes) {
      if (h.normal.size() != r)
        throw std::invalid_argument("subdivide_along: hyperplane has the wrong length");
      if (is_zero(h.normal))
        continue;
      std::vector<Polyhedron> next;
      for (auto &q : current) {
        auto base = q.constraints();
        auto below = base, above = base;
        below.push_back(less(h.normal, h.offset));
        above.push_back(greater(h.normal, h.offset));
        if (!is_feasible(below, r) || !is_feasible(above, r)) {
          next.push_back(std::move(q));
          continue;
        }
        next.push_back(*q.intersect({greater_equal(h.normal, h.offset)}));
        next.push_back(*q.intersect({less_equal(h.normal, h.offset)}));
      }
      current = std::move(next);
    }
    pieces.insert(pieces.end(), current.begin(), current.end());
  }
  return PolyComplex::from_cells(r, pieces);
}

std::vector<Hyperplane> supporting_hyperplanes(const std::vector<Polyhedron> &cells) {
  std::set<std::string> seen;
  std::vector<Hyperplane> out;
  auto push = [&](const Halfspace &h) {
    // Orientation-free key: flip so the first nonzero entry is positive.
    IntVector n = h.normal;
    Rational b = h.offset;
    for (const auto &x : n)
      if (x != 0) {
        if (x < 0) {
          for (auto &y : n)
            y = -y;
          b = -b;
        }
        break;
      }
    if (seen.insert(to_string(n) + "=" + to_string(b)).second)
      out.push_back({to_rational(n), b});
  };
  for (const auto &p : cells) {
    for (const auto &h : p.inequalities())
      push(h);
    for (const auto &e : p.equalities())
      push(e);
  }
  return out;
}

} // namespace tropcert
