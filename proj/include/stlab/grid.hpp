#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlab/geometry.hpp"

namespace stlab {

/// Raised when a requested spacing does not resolve the holes.
class GridResolutionError : public std::invalid_argument {
 public:
  GridResolutionError(const std::string& what, std::vector<std::size_t> minimal_counts)
      : std::invalid_argument(what), minimal_counts_(std::move(minimal_counts)) {}
  const std::vector<std::size_t>& minimal_counts() const { return minimal_counts_; }

 private:
  std::vector<std::size_t> minimal_counts_;
};

/// Uniform tensor grid over the closed rod [0, eps]^{N-1} x [0, 1]. Axis 0 is
/// the fastest-varying index, the rod axis (N-1) the slowest, so every axial
/// slice is one contiguous block. Nodes inside a hole are pinned (Dirichlet).
class StructuredGrid {
 public:
  int dimension() const { return static_cast<int>(counts_.size()); }
  std::span<const std::size_t> counts() const { return counts_; }
  std::span<const double> spacing() const { return spacing_; }
  std::span<const double> extent() const { return extent_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  std::size_t node_count() const { return mask_.size(); }
  std::size_t fluid_count() const { return fluid_nodes_.size(); }
  /// Nodes per axial slice.
  std::size_t slice_size() const { return strides_.back(); }
  std::size_t hole_node_count() const { return node_count() - fluid_count(); }

  bool is_fluid(std::size_t box_index) const { return mask_[box_index] != 0; }
  std::span<const std::uint8_t> mask() const { return mask_; }
  /// Box index of each fluid unknown, ascending.
  std::span<const std::size_t> fluid_nodes() const { return fluid_nodes_; }

  double coordinate(int axis, std::size_t i) const;
  std::vector<double> node_coordinates(std::size_t box_index) const;
  std::size_t axis_index(std::size_t box_index, int axis) const {
    return (box_index / strides_[axis]) % counts_[axis];
  }

  /// Trapezoidal weight along one axis: h/2 at the two ends, h inside.
  double axis_weight(int axis, std::size_t i) const {
    return (i == 0 || i + 1 == counts_[axis]) ? 0.5 * spacing_[axis] : spacing_[axis];
  }
  /// Tensor trapezoidal weight of a node.
  double node_weight(std::size_t box_index) const;

  double cross_section_side() const { return extent_.front(); }
  /// |eps Omega_0|
  double cross_section_volume() const;
  const std::optional<PerforatedDomainSpec>& domain() const { return domain_; }

  /// Grid over a perforated rod with spacing <= target_h on every axis.
  /// When holes exist, target_h must not exceed r/2.
  static std::shared_ptr<const StructuredGrid> build(const PerforatedDomainSpec& spec, double target_h);
  /// Hole-free rod (0, eps)^{N-1} x (0, 1).
  static std::shared_ptr<const StructuredGrid> box(int dimension, double epsilon, double target_h);

 private:
  StructuredGrid(int dimension, double epsilon, double target_h);
  void classify(const PerforatedDomainSpec& spec);

  std::vector<std::size_t> counts_;
  std::vector<double> spacing_;
  std::vector<double> extent_;
  std::vector<std::size_t> strides_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> fluid_nodes_;
  std::optional<PerforatedDomainSpec> domain_;
};

inline std::shared_ptr<const StructuredGrid> build_grid(const PerforatedDomainSpec& spec, double target_h) {
  return StructuredGrid::build(spec, target_h);
}

}  // namespace stlab
