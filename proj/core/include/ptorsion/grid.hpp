#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ptorsion {

/// Integer coordinates of a lattice node; node positions are `index * h`.
using LatticeIndex = std::array<std::int64_t, 3>;

/// Maximum supported grid dimension.
inline constexpr int kMaxDimension = 3;

/// Interior index used for nodes outside the mask (value fixed to zero).
inline constexpr std::int32_t kExterior = -1;

/// A forward-difference cell: its base node and the node one step along each
/// axis. Entries are interior indices, or kExterior where the field vanishes.
struct Cell {
  std::int32_t base = kExterior;
  std::array<std::int32_t, kMaxDimension> next{kExterior, kExterior, kExterior};
};

/// Uniform Cartesian lattice anchored at the origin with an interior mask.
///
/// Storage covers the bounding box of the mask padded by one node on every
/// side, so every neighbour of an interior node is addressable and exterior.
/// Interior nodes are numbered in row-major order of their lattice position;
/// all reductions in the library follow that order.
class Grid {
 public:
  /// `lower`/`extents` describe the box covered by `mask` (row-major, last
  /// axis fastest). Unused axes must have extent 1.
  Grid(int dimension, double spacing, LatticeIndex lower, LatticeIndex extents,
       std::vector<std::uint8_t> mask);

  int dimension() const noexcept { return dimension_; }
  double spacing() const noexcept { return spacing_; }
  /// h^N, the quadrature weight of one node.
  double cell_volume() const noexcept { return cell_volume_; }

  const LatticeIndex& lower() const noexcept { return lower_; }
  const LatticeIndex& extents() const noexcept { return extents_; }
  std::size_t node_count() const noexcept { return interior_of_node_.size(); }
  std::size_t interior_count() const noexcept { return interior_nodes_.size(); }

  /// Linear storage ids of interior nodes, ascending.
  std::span<const std::size_t> interior_nodes() const noexcept { return interior_nodes_; }
  std::int32_t interior_index(std::size_t node) const { return interior_of_node_[node]; }
  bool is_interior(std::size_t node) const { return interior_of_node_[node] != kExterior; }

  LatticeIndex lattice_index(std::size_t node) const;
  std::optional<std::size_t> node_at(const LatticeIndex& index) const;
  /// Interior index of a lattice position, kExterior when not interior or
  /// outside storage.
  std::int32_t interior_at(const LatticeIndex& index) const;

  std::array<double, 3> position(std::size_t node) const;
  std::array<double, 3> interior_position(std::size_t interior) const {
    return position(interior_nodes_[interior]);
  }
  LatticeIndex interior_lattice_index(std::size_t interior) const {
    return lattice_index(interior_nodes_[interior]);
  }

  /// Every cell touching at least one interior node, in row-major order of
  /// the base node.
  std::span<const Cell> cells() const noexcept { return cells_; }

  /// Same dimension and spacing, hence aligned lattices.
  bool same_lattice(const Grid& other) const noexcept;
  bool operator==(const Grid& other) const;

 private:
  int dimension_;
  double spacing_;
  double cell_volume_;
  LatticeIndex lower_;
  LatticeIndex extents_;
  std::vector<std::int32_t> interior_of_node_;
  std::vector<std::size_t> interior_nodes_;
  std::vector<Cell> cells_;
};

/// Connected components of the interior under cell coupling: two interior
/// nodes are connected when some cell stencil contains both. Returns one
/// label per interior node; labels are dense and ordered by first appearance.
std::vector<std::int32_t> component_labels(const Grid& grid);

}  // namespace ptorsion
