#pragma once

#include <cstddef>
#include <vector>

#include "stlab/profile.hpp"

namespace stlab {

/// A = -d^2/dt^2 + mu on (0, 1) with Neumann ends, shifted by z, discretised
/// on n uniform intervals.
struct LimitOperatorSpec {
  double mu = 0.0;
  double z = 1.0;
  std::size_t intervals = 100;

  /// Throws std::invalid_argument unless mu >= 0, z >= 0, z + mu > 0, n >= 2.
  void validate() const;
};

/// Symmetric tridiagonal system K + (z + mu) W of the discrete operator, with
/// trapezoidal weights W. `diagonal` has n + 1 entries, `off_diagonal` n.
struct Tridiagonal {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;
  std::vector<double> weights;
};
Tridiagonal limit_system(const LimitOperatorSpec& spec);

/// Solves (-d^2/dt^2 + z + mu) u = f, u' = 0 at both ends; second-order
/// central differences with mirror ghosts, direct tridiagonal elimination.
Profile solve_limit_ode(const LimitOperatorSpec& spec, const Profile& f);

/// (A + z)^{-1} g.
inline Profile resolvent_apply(const LimitOperatorSpec& spec, const Profile& g) {
  return solve_limit_ode(spec, g);
}

/// {mu + (j pi)^2 : j = 0..k-1}.
std::vector<double> limit_eigenvalues(double mu, std::size_t k);

}  // namespace stlab
