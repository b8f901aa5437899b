#pragma once

#include "tropcert/polyhedron.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tropcert {

inline constexpr size_t npos = std::numeric_limits<size_t>::max();

/// A face-closed collection of polyhedra with stable integer ids and labels.
///
/// Construction closes the generators under taking faces and removes
/// duplicates. `validate()` additionally checks that any two cells meet in a
/// common face; operations in this library that build complexes satisfy that
/// by construction and skip the quadratic check.
class PolyComplex {
public:
  PolyComplex() = default;

  /// Generators may be any cells; labels (optional, parallel to generators)
  /// name them, and generated faces get labels "_<id>".
  static PolyComplex from_cells(size_t ambient_rank, const std::vector<Polyhedron> &generators,
                                const std::vector<std::string> &labels = {});

  /// Throws std::invalid_argument naming the offending pair when two cells do
  /// not intersect in a common face.
  void validate() const;

  size_t ambient_rank() const { return ambient_rank_; }
  size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const Polyhedron &cell(size_t id) const { return cells_.at(id); }
  const std::vector<Polyhedron> &cells() const { return cells_; }
  const std::string &label(size_t id) const { return labels_.at(id); }

  std::optional<size_t> find(const Polyhedron &p) const;
  std::optional<size_t> find_label(const std::string &label) const;

  const std::vector<size_t> &facets(size_t id) const { return facets_.at(id); }
  const std::vector<size_t> &cofacets(size_t id) const { return cofacets_.at(id); }
  /// All faces of a cell, including the cell.
  std::vector<size_t> faces_of(size_t id) const;
  bool is_face_of(size_t face, size_t cell) const;

  std::vector<size_t> cells_of_dim(size_t d) const;
  /// Cells that are not a proper face of another cell.
  std::vector<size_t> maximal_cells() const;
  size_t dim() const;

  /// The cell whose relative interior contains x, if any.
  std::optional<size_t> locate(const RatVector &x) const;

  /// Same cell set (labels ignored).
  bool same_cells(const PolyComplex &other) const;

private:
  size_t ambient_rank_ = 0;
  std::vector<Polyhedron> cells_;
  std::vector<std::string> labels_;
  std::vector<std::vector<size_t>> facets_;
  std::vector<std::vector<size_t>> cofacets_;
  std::map<std::string, size_t> by_key_;
  std::map<std::string, size_t> by_label_;
};

/// For each cell of `fine`, the cell of `coarse` whose relative interior
/// contains its relative interior point (npos if none).
std::vector<size_t> provenance(const PolyComplex &fine, const PolyComplex &coarse);

/// All nonempty intersections of maximal cells of the two complexes, with
/// their faces. Supported on |c1| ∩ |c2| and refining both there.
PolyComplex common_refinement(const PolyComplex &c1, const PolyComplex &c2);

/// A hyperplane ⟨normal, x⟩ = offset.
struct Hyperplane {
  RatVector normal;
  Rational offset;
};

/// Splits every maximal cell by each hyperplane; every cell of the result
/// lies in a closed halfspace of each hyperplane and the support is unchanged.
PolyComplex subdivide_along(const PolyComplex &c, const std::vector<Hyperplane> &hyperplanes);

/// Hyperplanes carrying the constraints of the given cells (facet and
/// affine-hull equations), deduplicated.
std::vector<Hyperplane> supporting_hyperplanes(const std::vector<Polyhedron> &cells);

} // namespace tropcert
