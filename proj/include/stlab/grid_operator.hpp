#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "stlab/field.hpp"
#include "stlab/grid.hpp"

namespace stlab {

/// Compressed-row symmetric matrix over the fluid unknowns.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> cols;
  std::vector<double> vals;

  double entry(std::size_t i, std::size_t j) const;
  void multiply(std::span<const double> x, std::span<double> y) const;
};

/// Discrete (-Laplace + z) on the fluid nodes of a structured grid: 2N+1-point
/// stencil, homogeneous Neumann on the outer faces through mirror ghosts,
/// homogeneous Dirichlet on pinned hole nodes.
///
/// The operator has two equivalent views. The grid-function view `apply`
/// is the finite-difference operator A. The symmetric view S = W A, with W
/// the tensor trapezoidal weights, is the matrix actually stored and handed to
/// the solvers; S = K + z W with K the weighted stiffness.
///
/// Matrix-free: stencil coefficients are regenerated per grid line.
class GridOperator {
 public:
  /// Throws std::invalid_argument unless z > 0.
  GridOperator(std::shared_ptr<const StructuredGrid> grid, double z);

  const StructuredGrid& grid() const { return *grid_; }
  const std::shared_ptr<const StructuredGrid>& grid_ptr() const { return grid_; }
  double shift() const { return z_; }
  std::size_t size() const { return grid_->fluid_count(); }

  /// A u in grid-function form.
  Field apply(const Field& u) const;

  /// out = S in on the full box. Entries of `in` on hole nodes must be zero;
  /// hole entries of `out` are set to zero.
  void apply_symmetric_box(std::span<const double> in, std::span<double> out) const;
  /// out = A in on the full box (grid-function form), same conventions.
  void apply_box(std::span<const double> in, std::span<double> out) const;

  /// Diagonal of S, W and 1/diag(S) on the box (zero on holes).
  const std::vector<double>& diagonal_box() const { return diagonal_; }
  const std::vector<double>& mass_box() const { return mass_; }
  const std::vector<double>& inverse_diagonal_box() const { return inv_diagonal_; }

  /// Entry (row, col) of S, indices into fluid unknowns.
  double entry(std::size_t row, std::size_t col) const;
  /// Explicit S; intended for small grids.
  CsrMatrix to_csr() const;

 private:
  enum class Form { Symmetric, GridFunction };
  template <Form F>
  void apply_impl(std::span<const double> in, std::span<double> out) const;
  void setup_lines();
  std::size_t line_of(std::size_t box_index) const { return box_index / grid_->counts()[0]; }

  std::shared_ptr<const StructuredGrid> grid_;
  double z_;

  // per grid line along axis 0
  std::size_t transverse_ = 0;               // 2 (N - 1) neighbour slots per line
  std::vector<std::size_t> line_base_;
  std::vector<double> line_weight_;          // product of trapezoid weights of axes >= 1
  std::vector<double> line_axial_coef_;      // S coefficient of axis-0 edges
  std::vector<std::ptrdiff_t> nb_offset_;    // neighbour line offset (0 when absent)
  std::vector<double> nb_sym_coef_;          // S coefficient / axis-0 weight (0 when absent)
  std::vector<double> nb_fd_coef_;           // A coefficient (0 when absent)
  std::vector<double> axis0_weight_;         // trapezoid weight along axis 0
  std::vector<double> axis0_fd_coef_;        // A coefficient of axis-0 edges per node
  std::vector<double> mask_;                 // 1 fluid, 0 hole

  std::vector<double> diagonal_;
  std::vector<double> mass_;
  std::vector<double> inv_diagonal_;
};

}  // namespace stlab
