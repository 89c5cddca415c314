#pragma once

#include <memory>
#include <span>
#include <vector>

#include "stlab/grid.hpp"

namespace stlab {

/// Values on the fluid (unknown) nodes of a grid, in grid.fluid_nodes() order.
struct Field {
  std::shared_ptr<const StructuredGrid> grid;
  std::vector<double> values;

  static Field zeros(std::shared_ptr<const StructuredGrid> grid);
  static Field constant(std::shared_ptr<const StructuredGrid> grid, double c);

  std::size_t size() const { return values.size(); }

  /// Full-box layout with zeros on hole nodes.
  std::vector<double> to_box() const;
  static Field from_box(std::shared_ptr<const StructuredGrid> grid, std::span<const double> box);
};

}  // namespace stlab
