#include "ptorsion/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ptorsion/error.hpp"

namespace ptorsion {

namespace {

std::size_t checked_volume(const LatticeIndex& extents) {
  std::size_t volume = 1;
  for (auto e : extents) volume *= static_cast<std::size_t>(e);
  return volume;
}

}  // namespace

Grid::Grid(int dimension, double spacing, LatticeIndex lower, LatticeIndex extents,
           std::vector<std::uint8_t> mask)
    : dimension_(dimension), spacing_(spacing) {
  if (dimension < 1 || dimension > kMaxDimension)
    throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw InvalidArgument("grid spacing h must be positive");
  for (int a = 0; a < kMaxDimension; ++a) {
    if (extents[a] < 1) throw InvalidArgument("grid extents must be positive");
    if (a >= dimension && extents[a] != 1)
      throw InvalidArgument("unused grid axes must have extent 1");
  }
  if (mask.size() != checked_volume(extents))
    throw InvalidArgument("grid mask size does not match extents");

  cell_volume_ = std::pow(spacing, dimension);

  // Pad one node on each side of every used axis.
  lower_ = lower;
  extents_ = extents;
  for (int a = 0; a < dimension; ++a) {
    lower_[a] -= 1;
    extents_[a] += 2;
  }
  interior_of_node_.assign(checked_volume(extents_), kExterior);

  for (std::int64_t i = 0; i < extents[0]; ++i)
    for (std::int64_t j = 0; j < extents[1]; ++j)
      for (std::int64_t k = 0; k < extents[2]; ++k) {
        const std::size_t src =
            static_cast<std::size_t>((i * extents[1] + j) * extents[2] + k);
        if (!mask[src]) continue;
        const LatticeIndex shifted{i + (dimension > 0 ? 1 : 0), j + (dimension > 1 ? 1 : 0),
                                   k + (dimension > 2 ? 1 : 0)};
        const std::size_t dst = static_cast<std::size_t>(
            (shifted[0] * extents_[1] + shifted[1]) * extents_[2] + shifted[2]);
        interior_of_node_[dst] = 0;
      }

  for (std::size_t node = 0; node < interior_of_node_.size(); ++node) {
    if (interior_of_node_[node] == kExterior) continue;
    interior_of_node_[node] = static_cast<std::int32_t>(interior_nodes_.size());
    interior_nodes_.push_back(node);
  }

  std::array<std::size_t, kMaxDimension> stride{
      static_cast<std::size_t>(extents_[1] * extents_[2]),
      static_cast<std::size_t>(extents_[2]), 1};

  std::vector<std::size_t> bases;
  bases.reserve(interior_nodes_.size() * static_cast<std::size_t>(dimension + 1));
  for (auto node : interior_nodes_) {
    bases.push_back(node);
    for (int a = 0; a < dimension; ++a) bases.push_back(node - stride[a]);
  }
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());

  cells_.reserve(bases.size());
  for (auto b : bases) {
    Cell cell;
    cell.base = interior_of_node_[b];
    for (int a = 0; a < dimension; ++a) cell.next[a] = interior_of_node_[b + stride[a]];
    cells_.push_back(cell);
  }
}

LatticeIndex Grid::lattice_index(std::size_t node) const {
  const auto n = static_cast<std::int64_t>(node);
  const std::int64_t k = n % extents_[2];
  const std::int64_t j = (n / extents_[2]) % extents_[1];
  const std::int64_t i = n / (extents_[2] * extents_[1]);
  LatticeIndex local{i, j, k};
  for (int a = 0; a < dimension_; ++a) local[a] += lower_[a];
  for (int a = dimension_; a < kMaxDimension; ++a) local[a] = 0;
  return local;
}

std::optional<std::size_t> Grid::node_at(const LatticeIndex& index) const {
  LatticeIndex local{0, 0, 0};
  for (int a = 0; a < dimension_; ++a) {
    local[a] = index[a] - lower_[a];
    if (local[a] < 0 || local[a] >= extents_[a]) return std::nullopt;
  }
  return static_cast<std::size_t>((local[0] * extents_[1] + local[1]) * extents_[2] + local[2]);
}

std::int32_t Grid::interior_at(const LatticeIndex& index) const {
  const auto node = node_at(index);
  return node ? interior_of_node_[*node] : kExterior;
}

std::array<double, 3> Grid::position(std::size_t node) const {
  const auto idx = lattice_index(node);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dimension_; ++a) x[a] = static_cast<double>(idx[a]) * spacing_;
  return x;
}

bool Grid::same_lattice(const Grid& other) const noexcept {
  return dimension_ == other.dimension_ && spacing_ == other.spacing_;
}

bool Grid::operator==(const Grid& other) const {
  if (!same_lattice(other) || interior_count() != other.interior_count()) return false;
  for (std::size_t i = 0; i < interior_count(); ++i)
    if (interior_lattice_index(i) != other.interior_lattice_index(i)) return false;
  return true;
}

std::vector<std::int32_t> component_labels(const Grid& grid) {
  const std::size_t n = grid.interior_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  };

  const int dim = grid.dimension();
  for (const auto& cell : grid.cells()) {
    std::int32_t anchor = cell.base;
    for (int a = 0; a < dim; ++a) {
      const auto other = cell.next[a];
      if (other == kExterior) continue;
      if (anchor == kExterior)
        anchor = other;
      else
        unite(static_cast<std::size_t>(anchor), static_cast<std::size_t>(other));
    }
  }

  std::vector<std::int32_t> labels(n, kExterior);
  std::vector<std::int32_t> root_label(n, kExterior);
  std::int32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = find(i);
    if (root_label[r] == kExterior) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  return labels;
}

}  // namespace ptorsion
