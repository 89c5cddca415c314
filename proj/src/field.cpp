#include "stlab/field.hpp"

#include <stdexcept>

#include "stlab/parallel.hpp"

namespace stlab {

Field Field::zeros(std::shared_ptr<const StructuredGrid> grid) { return constant(std::move(grid), 0.0); }

Field Field::constant(std::shared_ptr<const StructuredGrid> grid, double c) {
  const auto n = grid->fluid_count();
  return Field{std::move(grid), std::vector<double>(n, c)};
}

std::vector<double> Field::to_box() const {
  std::vector<double> box(grid->node_count(), 0.0);
  const auto nodes = grid->fluid_nodes();
  parallel::for_chunks(nodes.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) box[nodes[i]] = values[i];
  });
  return box;
}

Field Field::from_box(std::shared_ptr<const StructuredGrid> grid, std::span<const double> box) {
  if (box.size() != grid->node_count()) throw std::invalid_argument("box vector size mismatch");
  Field f{grid, std::vector<double>(grid->fluid_count())};
  const auto nodes = grid->fluid_nodes();
  parallel::for_chunks(nodes.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) f.values[i] = box[nodes[i]];
  });
  return f;
}

}  // namespace stlab
