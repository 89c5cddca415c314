#include "stlab/identification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stlab/parallel.hpp"

namespace stlab {

namespace {

double inverse_sqrt_section(const StructuredGrid& grid) { return 1.0 / std::sqrt(grid.cross_section_volume()); }

/// u extended by zero minus U g, on the box.
std::vector<double> difference_box(const Field& u, const Profile& g) {
  const auto& grid = *u.grid;
  const int axis = grid.dimension() - 1;
  const double scale = inverse_sqrt_section(grid);
  const std::size_t slice = grid.slice_size();
  auto d = u.to_box();
  for (std::size_t k = 0; k < grid.counts()[axis]; ++k) {
    const double ug = scale * g(grid.coordinate(axis, k));
    for (std::size_t i = k * slice; i < (k + 1) * slice; ++i) d[i] -= ug;
  }
  return d;
}

double weighted_square_sum(const StructuredGrid& grid, const std::vector<double>& v) {
  return parallel::chunked_sums<1>(v.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += grid.node_weight(i) * v[i] * v[i];
    return std::array<double, 1>{s};
  })[0];
}

/// Trapezoid-weighted squared norm of the central difference along `axis`.
double gradient_square_sum(const StructuredGrid& grid, const std::vector<double>& v, int axis) {
  const std::size_t stride = grid.stride(axis);
  const std::size_t n = grid.counts()[axis];
  const double inv2h = 0.5 / grid.spacing()[axis];
  return parallel::chunked_sums<1>(v.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t b = lo; b < hi; ++b) {
      const std::size_t i = grid.axis_index(b, axis);
      if (i == 0 || i + 1 == n) continue;  // mirror ghost: zero central difference
      const double g = (v[b + stride] - v[b - stride]) * inv2h;
      s += grid.node_weight(b) * g * g;
    }
    return std::array<double, 1>{s};
  })[0];
}

}  // namespace

Field apply_Ueps(const Profile& g, std::shared_ptr<const StructuredGrid> grid) {
  const int axis = grid->dimension() - 1;
  const double scale = inverse_sqrt_section(*grid);
  Field f = Field::zeros(grid);
  const auto nodes = grid->fluid_nodes();
  const std::size_t slice = grid->slice_size();
  std::vector<double> per_slice(grid->counts()[axis]);
  for (std::size_t k = 0; k < per_slice.size(); ++k) per_slice[k] = scale * g(grid->coordinate(axis, k));
  parallel::for_chunks(nodes.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) f.values[i] = per_slice[nodes[i] / slice];
  });
  return f;
}

Profile apply_Veps(const Field& u) {
  const auto& grid = *u.grid;
  const int axis = grid.dimension() - 1;
  const double scale = inverse_sqrt_section(grid);
  const std::size_t slice = grid.slice_size();
  const auto box = u.to_box();
  std::vector<double> cross_weight(slice);
  for (std::size_t i = 0; i < slice; ++i) {
    double w = 1.0;
    for (int d = 0; d < axis; ++d) w *= grid.axis_weight(d, grid.axis_index(i, d));
    cross_weight[i] = w;
  }
  std::vector<double> values(grid.counts()[axis]);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(values.size()); ++k) {
    double s = 0.0;
    const double* row = box.data() + static_cast<std::size_t>(k) * slice;
    for (std::size_t i = 0; i < slice; ++i) s += cross_weight[i] * row[i];
    values[static_cast<std::size_t>(k)] = scale * s;
  }
  return Profile(std::move(values));
}

double l2_norm(const Field& u) { return std::sqrt(weighted_square_sum(*u.grid, u.to_box())); }

double l2_error(const Field& u, const Profile& g) {
  return std::sqrt(weighted_square_sum(*u.grid, difference_box(u, g)));
}

double h1_discrete_error(const Field& u, const Profile& g, double epsilon) {
  const auto& grid = *u.grid;
  const auto d = difference_box(u, g);
  double total = weighted_square_sum(grid, d);
  const int axis = grid.dimension() - 1;
  for (int a = 0; a < axis; ++a) total += epsilon * epsilon * gradient_square_sum(grid, d, a);
  total += gradient_square_sum(grid, d, axis);
  return std::sqrt(total);
}

double dirichlet_energy(const GridOperator& op, const Field& u) {
  const auto box = u.to_box();
  std::vector<double> su(box.size());
  op.apply_symmetric_box(box, su);
  const auto& w = op.mass_box();
  const auto sums = parallel::chunked_sums<2>(box.size(), [&](std::size_t lo, std::size_t hi) {
    double a = 0.0, m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      a += box[i] * su[i];
      m += w[i] * box[i] * box[i];
    }
    return std::array<double, 2>{a, m};
  });
  return sums[0] - op.shift() * sums[1];
}

double apriori_constant(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("a priori bound needs z > 0");
  return (1.0 / (2.0 * z) + 1.0) / std::min(1.0, 0.5 * z);
}

}  // namespace stlab
