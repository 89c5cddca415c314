#include "stlab/grid_operator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

#include "stlab/parallel.hpp"

namespace stlab {

double CsrMatrix::entry(std::size_t i, std::size_t j) const {
  const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? vals[static_cast<std::size_t>(it - cols.begin())] : 0.0;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

GridOperator::GridOperator(std::shared_ptr<const StructuredGrid> grid, double z)
    : grid_(std::move(grid)), z_(z) {
  if (!grid_) throw std::invalid_argument("operator needs a grid");
  if (!(z > 0.0)) throw std::invalid_argument("shift z must be positive");
  setup_lines();
}

void GridOperator::setup_lines() {
  const auto& g = *grid_;
  const int n = g.dimension();
  const std::size_t n0 = g.counts()[0];
  const double h0 = g.spacing()[0];
  const std::size_t lines = g.node_count() / n0;
  transverse_ = 2 * static_cast<std::size_t>(n - 1);

  axis0_weight_.resize(n0);
  axis0_fd_coef_.resize(n0);
  for (std::size_t i = 0; i < n0; ++i) {
    axis0_weight_[i] = g.axis_weight(0, i);
    axis0_fd_coef_[i] = (i == 0 || i + 1 == n0) ? 2.0 / (h0 * h0) : 1.0 / (h0 * h0);
  }

  line_base_.resize(lines);
  line_weight_.resize(lines);
  line_axial_coef_.resize(lines);
  nb_offset_.assign(lines * transverse_, 0);
  nb_sym_coef_.assign(lines * transverse_, 0.0);
  nb_fd_coef_.assign(lines * transverse_, 0.0);

  std::vector<double> wo(n);
  std::vector<std::size_t> idx(n);
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t base = line * n0;
    line_base_[line] = base;
    double outer = 1.0;
    for (int d = 1; d < n; ++d) {
      idx[d] = g.axis_index(base, d);
      wo[d] = g.axis_weight(d, idx[d]);
      outer *= wo[d];
    }
    line_weight_[line] = outer;
    line_axial_coef_[line] = outer / h0;
    for (int d = 1; d < n; ++d) {
      // product over the other transverse axes in ascending order, so that
      // both endpoints of an edge compute the identical coefficient
      double p = 1.0;
      for (int e = 1; e < n; ++e)
        if (e != d) p *= wo[e];
      const double hd = g.spacing()[d];
      const double sym = p / hd;
      const double fd = 1.0 / (hd * g.axis_weight(d, idx[d]));
      const auto stride = static_cast<std::ptrdiff_t>(g.stride(d));
      const std::size_t slot = line * transverse_ + 2 * static_cast<std::size_t>(d - 1);
      if (idx[d] > 0) {
        nb_offset_[slot] = -stride;
        nb_sym_coef_[slot] = sym;
        nb_fd_coef_[slot] = fd;
      }
      if (idx[d] + 1 < g.counts()[d]) {
        nb_offset_[slot + 1] = stride;
        nb_sym_coef_[slot + 1] = sym;
        nb_fd_coef_[slot + 1] = fd;
      }
    }
  }

  const std::size_t total = g.node_count();
  mask_.resize(total);
  diagonal_.assign(total, 0.0);
  mass_.assign(total, 0.0);
  inv_diagonal_.assign(total, 0.0);
  const auto mask = g.mask();
  const double z = z_;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(lines); ++l) {
    const auto line = static_cast<std::size_t>(l);
    const std::size_t base = line_base_[line];
    for (std::size_t i = 0; i < n0; ++i) {
      const std::size_t b = base + i;
      mask_[b] = mask[b] ? 1.0 : 0.0;
      if (!mask[b]) continue;
      const double axial_neighbours = (i == 0 || i + 1 == n0) ? 1.0 : 2.0;
      double diag = axial_neighbours * line_axial_coef_[line];
      for (std::size_t s = 0; s < transverse_; ++s)
        diag += axis0_weight_[i] * nb_sym_coef_[line * transverse_ + s];
      const double m = axis0_weight_[i] * line_weight_[line];
      diag += z * m;
      diagonal_[b] = diag;
      mass_[b] = m;
      inv_diagonal_[b] = 1.0 / diag;
    }
  }
}

template <GridOperator::Form F>
void GridOperator::apply_impl(std::span<const double> in, std::span<double> out) const {
  const std::size_t n0 = grid_->counts()[0];
  const std::size_t lines = line_base_.size();
  const double z = z_;
  if (in.size() != mask_.size() || out.size() != mask_.size())
    throw std::invalid_argument("box vector size mismatch");
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(lines); ++l) {
    const auto line = static_cast<std::size_t>(l);
    const std::size_t base = line_base_[line];
    const double* u = in.data() + base;
    double* o = out.data() + base;
    const double* w0 = axis0_weight_.data();

    if constexpr (F == Form::Symmetric) {
      const double a = line_axial_coef_[line];
      const double zw = z * line_weight_[line];
      o[0] = a * (u[0] - u[1]) + zw * w0[0] * u[0];
      for (std::size_t i = 1; i + 1 < n0; ++i)
        o[i] = a * ((u[i] - u[i - 1]) + (u[i] - u[i + 1])) + zw * w0[i] * u[i];
      o[n0 - 1] = a * (u[n0 - 1] - u[n0 - 2]) + zw * w0[n0 - 1] * u[n0 - 1];
    } else {
      const double* c0 = axis0_fd_coef_.data();
      o[0] = c0[0] * (u[0] - u[1]) + z * u[0];
      for (std::size_t i = 1; i + 1 < n0; ++i)
        o[i] = c0[i] * ((u[i] - u[i - 1]) + (u[i] - u[i + 1])) + z * u[i];
      o[n0 - 1] = c0[n0 - 1] * (u[n0 - 1] - u[n0 - 2]) + z * u[n0 - 1];
    }

    for (std::size_t s = 0; s < transverse_; ++s) {
      const std::size_t slot = line * transverse_ + s;
      if (nb_sym_coef_[slot] == 0.0) continue;
      const double* v = u + nb_offset_[slot];
      if constexpr (F == Form::Symmetric) {
        const double c = nb_sym_coef_[slot];
        for (std::size_t i = 0; i < n0; ++i) o[i] += (w0[i] * c) * (u[i] - v[i]);
      } else {
        const double c = nb_fd_coef_[slot];
        for (std::size_t i = 0; i < n0; ++i) o[i] += c * (u[i] - v[i]);
      }
    }

    const double* m = mask_.data() + base;
    for (std::size_t i = 0; i < n0; ++i) o[i] *= m[i];
  }
}

void GridOperator::apply_symmetric_box(std::span<const double> in, std::span<double> out) const {
  apply_impl<Form::Symmetric>(in, out);
}

void GridOperator::apply_box(std::span<const double> in, std::span<double> out) const {
  apply_impl<Form::GridFunction>(in, out);
}

Field GridOperator::apply(const Field& u) const {
  if (u.grid != grid_ && (u.grid == nullptr || u.size() != size()))
    throw std::invalid_argument("field does not live on the operator grid");
  const auto box = u.to_box();
  std::vector<double> out(box.size());
  apply_box(box, out);
  return Field::from_box(grid_, out);
}

double GridOperator::entry(std::size_t row, std::size_t col) const {
  const auto nodes = grid_->fluid_nodes();
  if (row >= nodes.size() || col >= nodes.size()) throw std::out_of_range("operator index");
  const std::size_t br = nodes[row];
  const std::size_t bc = nodes[col];
  if (br == bc) return diagonal_[br];
  const std::size_t n0 = grid_->counts()[0];
  const std::size_t lr = line_of(br);
  const std::size_t i0 = br - line_base_[lr];
  if (line_of(bc) == lr) {
    const std::size_t j0 = bc - line_base_[lr];
    return (j0 + 1 == i0 || i0 + 1 == j0) ? -line_axial_coef_[lr] : 0.0;
  }
  if (bc - line_base_[line_of(bc)] != i0 || n0 == 0) return 0.0;
  for (std::size_t s = 0; s < transverse_; ++s) {
    const std::size_t slot = lr * transverse_ + s;
    if (nb_sym_coef_[slot] != 0.0 &&
        static_cast<std::ptrdiff_t>(br) + nb_offset_[slot] == static_cast<std::ptrdiff_t>(bc))
      return -(axis0_weight_[i0] * nb_sym_coef_[slot]);
  }
  return 0.0;
}

CsrMatrix GridOperator::to_csr() const {
  const auto& g = *grid_;
  const auto nodes = g.fluid_nodes();
  constexpr auto npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> unknown(g.node_count(), npos);
  for (std::size_t i = 0; i < nodes.size(); ++i) unknown[nodes[i]] = i;
  const std::size_t n0 = g.counts()[0];

  CsrMatrix m;
  m.rows = nodes.size();
  m.row_ptr.push_back(0);
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    const std::size_t b = nodes[r];
    const std::size_t line = line_of(b);
    const std::size_t i0 = b - line_base_[line];
    row.clear();
    row.emplace_back(r, diagonal_[b]);
    if (i0 > 0 && unknown[b - 1] != npos) row.emplace_back(unknown[b - 1], -line_axial_coef_[line]);
    if (i0 + 1 < n0 && unknown[b + 1] != npos) row.emplace_back(unknown[b + 1], -line_axial_coef_[line]);
    for (std::size_t s = 0; s < transverse_; ++s) {
      const std::size_t slot = line * transverse_ + s;
      if (nb_sym_coef_[slot] == 0.0) continue;
      const auto nb = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(b) + nb_offset_[slot]);
      if (unknown[nb] != npos) row.emplace_back(unknown[nb], -(axis0_weight_[i0] * nb_sym_coef_[slot]));
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      m.cols.push_back(c);
      m.vals.push_back(v);
    }
    m.row_ptr.push_back(m.cols.size());
  }
  return m;
}

}  // namespace stlab
