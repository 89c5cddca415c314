#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace stlab {

/// Symmetric-definite pencil A x = lambda M x with diagonal M. Entries with
/// M_i = 0 are treated as frozen at zero (e.g. pinned nodes kept in a box
/// layout); every vector the callbacks produce must vanish there.
struct PencilOperators {
  std::size_t size = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply_stiffness;
  std::vector<double> mass;
  /// Solves (A + shift M) x = rhs to relative residual rel_tol; x carries the
  /// initial guess. Returns the iteration count (0 for direct solvers).
  std::function<int(std::span<const double> rhs, std::span<double> x, double rel_tol)> solve_shifted;
  double shift = 0.0;
};

struct BlockIterationOptions {
  std::size_t guard = 2;            // extra block vectors beyond k
  int max_outer = 200;
  std::uint64_t seed = 0x5eedULL;
  double inner_tol_factor = 0.05;   // inner tolerance relative to the current pair residual
  double inner_tol_floor = 1e-13;
  double inner_tol_ceiling = 1e-2;
};

struct PencilEigenpairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // M-orthonormal
  std::vector<double> residuals;             // ||A x - lambda M x||_{M^-1} / lambda
  int outer_iterations = 0;
  long inner_iterations = 0;
  bool converged = false;
};

/// Block inverse iteration with Rayleigh-Ritz and locking of converged
/// leading pairs. `initial` may hold up to k + guard start vectors; the rest
/// of the block is filled with seeded random vectors. Returns the k smallest
/// pairs in ascending order; `converged` reports whether all residuals reached
/// tol within the outer budget.
PencilEigenpairs block_inverse_iteration(const PencilOperators& ops, std::size_t k, double tol,
                                         std::vector<std::vector<double>> initial,
                                         const BlockIterationOptions& options = {});

/// Orders pairs by value, breaking near-ties by the first differing
/// coefficient, after fixing each vector's sign so that its first significant
/// coefficient is positive.
void canonicalize_eigenpairs(std::vector<double>& values, std::vector<std::vector<double>>& vectors,
                             std::vector<double>* residuals = nullptr);

}  // namespace stlab
