#include "stlab/grid.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "stlab/parallel.hpp"

namespace stlab {

namespace {

std::size_t nodes_for(double extent, double h) {
  // smallest count with extent / (count - 1) <= h
  return static_cast<std::size_t>(std::ceil(extent / h * (1.0 - 1e-12))) + 1;
}

}  // namespace

StructuredGrid::StructuredGrid(int dimension, double epsilon, double target_h) {
  if (dimension < 1) throw std::invalid_argument("grid dimension must be positive");
  if (!(target_h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  std::size_t total = 1;
  for (int d = 0; d < dimension; ++d) {
    const double extent = d + 1 == dimension ? 1.0 : epsilon;
    const std::size_t n = std::max<std::size_t>(nodes_for(extent, target_h), 2);
    extent_.push_back(extent);
    counts_.push_back(n);
    spacing_.push_back(extent / static_cast<double>(n - 1));
    strides_.push_back(total);
    total *= n;
  }
  mask_.assign(total, 1);
}

double StructuredGrid::coordinate(int axis, std::size_t i) const {
  return i + 1 == counts_[axis] ? extent_[axis] : static_cast<double>(i) * spacing_[axis];
}

std::vector<double> StructuredGrid::node_coordinates(std::size_t box_index) const {
  std::vector<double> x(counts_.size());
  for (int d = 0; d < dimension(); ++d) x[d] = coordinate(d, axis_index(box_index, d));
  return x;
}

double StructuredGrid::node_weight(std::size_t box_index) const {
  double w = 1.0;
  for (int d = 0; d < dimension(); ++d) w *= axis_weight(d, axis_index(box_index, d));
  return w;
}

double StructuredGrid::cross_section_volume() const {
  double v = 1.0;
  for (int d = 0; d + 1 < dimension(); ++d) v *= extent_[d];
  return v;
}

void StructuredGrid::classify(const PerforatedDomainSpec& spec) {
  const int n = dimension();
  parallel::for_chunks(mask_.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(n);
    for (std::size_t b = lo; b < hi; ++b) {
      for (int d = 0; d < n; ++d) x[d] = coordinate(d, axis_index(b, d));
      mask_[b] = classify_point(spec, x) == PointClass::InHole ? 0 : 1;
    }
  });
  fluid_nodes_.clear();
  for (std::size_t b = 0; b < mask_.size(); ++b)
    if (mask_[b]) fluid_nodes_.push_back(b);
}

std::shared_ptr<const StructuredGrid> StructuredGrid::build(const PerforatedDomainSpec& spec,
                                                            double target_h) {
  const int n = spec.dimension();
  bool has_holes = true;
  for (int d = 0; d < n; ++d) has_holes = has_holes && axis_lattice(spec, d).count > 0;
  const double limit = 0.5 * spec.hole_radius();
  if (has_holes && target_h > limit * (1.0 + 1e-12)) {
    std::vector<std::size_t> minimal;
    std::ostringstream msg;
    msg << "spacing " << target_h << " does not resolve holes of radius " << spec.hole_radius()
        << " (need h <= " << limit << "); minimal node counts:";
    for (int d = 0; d < n; ++d) {
      minimal.push_back(nodes_for(spec.extent(d), limit));
      msg << ' ' << minimal.back();
    }
    throw GridResolutionError(msg.str(), std::move(minimal));
  }
  auto grid = std::shared_ptr<StructuredGrid>(new StructuredGrid(n, spec.epsilon(), target_h));
  grid->domain_ = spec;
  if (has_holes) {
    grid->classify(spec);
  } else {
    grid->fluid_nodes_.resize(grid->mask_.size());
    for (std::size_t b = 0; b < grid->mask_.size(); ++b) grid->fluid_nodes_[b] = b;
  }
  return grid;
}

std::shared_ptr<const StructuredGrid> StructuredGrid::box(int dimension, double epsilon, double target_h) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("cross-section side must be positive");
  auto grid = std::shared_ptr<StructuredGrid>(new StructuredGrid(dimension, epsilon, target_h));
  grid->fluid_nodes_.resize(grid->mask_.size());
  for (std::size_t b = 0; b < grid->mask_.size(); ++b) grid->fluid_nodes_[b] = b;
  return grid;
}

}  // namespace stlab
