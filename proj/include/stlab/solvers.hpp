#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlab/field.hpp"
#include "stlab/grid_operator.hpp"

namespace stlab {

/// An iterative solver exhausted its budget.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, int iterations, double residual,
                 std::vector<double> pair_residuals = {})
      : std::runtime_error(what),
        iterations_(iterations),
        residual_(residual),
        pair_residuals_(std::move(pair_residuals)) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  const std::vector<double>& pair_residuals() const { return pair_residuals_; }

 private:
  int iterations_;
  double residual_;
  std::vector<double> pair_residuals_;
};

struct CgStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Default iteration budget, 50 * cbrt(unknowns).
int default_cg_budget(std::size_t unknowns);

/// Jacobi-preconditioned CG on the symmetric box system S x = b; x holds the
/// initial guess. Stops at ||b - S x|| <= tol ||b||. Throws NonConvergence when
/// the budget (0 = default) runs out.
CgStats conjugate_gradient_box(const GridOperator& op, std::span<const double> rhs, std::span<double> x,
                               double tol, int max_iterations = 0);

struct PoissonSolution {
  Field solution;
  CgStats stats;
};

/// Solves (-Laplace_h + z) u = f with f given as a grid function.
PoissonSolution solve_poisson(const GridOperator& op, const Field& rhs, double tol = 1e-10);

struct EigenPair {
  double value;
  Field vector;  // unit norm in the discrete L2 (trapezoidal) inner product
  double residual;
};

struct EigenOptions {
  std::size_t guard = 2;
  int max_outer = 200;
  /// Optional start vectors (grid functions); random vectors fill the rest.
  std::vector<Field> initial;
};

struct EigenSolveStats {
  int outer_iterations = 0;
  long inner_iterations = 0;
};

/// k smallest eigenpairs of A (including the shift z), ascending, with
/// ||A v - lambda v|| <= tol * lambda. Block inverse iteration with
/// Rayleigh-Ritz and deflation; inner solves by CG.
/// Throws NonConvergence with per-pair residuals.
std::vector<EigenPair> smallest_eigenpairs(const GridOperator& op, std::size_t k, double tol = 1e-8,
                                           const EigenOptions& options = {}, EigenSolveStats* stats = nullptr);

}  // namespace stlab
