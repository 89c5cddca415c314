#include "stlab/limit1d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stlab {

void LimitOperatorSpec::validate() const {
  if (!(mu >= 0.0)) throw std::invalid_argument("mu must be non-negative");
  if (!(z >= 0.0) || !(z + mu > 0.0)) throw std::invalid_argument("need z >= 0 and z + mu > 0");
  if (intervals < 2) throw std::invalid_argument("limit grid needs at least two intervals");
}

Tridiagonal limit_system(const LimitOperatorSpec& spec) {
  spec.validate();
  const std::size_t n = spec.intervals;
  const double h = 1.0 / static_cast<double>(n);
  const double c = spec.z + spec.mu;
  Tridiagonal t;
  t.weights.assign(n + 1, h);
  t.weights.front() = t.weights.back() = 0.5 * h;
  t.off_diagonal.assign(n, -1.0 / h);
  t.diagonal.assign(n + 1, 2.0 / h);
  t.diagonal.front() = t.diagonal.back() = 1.0 / h;
  for (std::size_t k = 0; k <= n; ++k) t.diagonal[k] += c * t.weights[k];
  return t;
}

Profile solve_limit_ode(const LimitOperatorSpec& spec, const Profile& f) {
  const auto t = limit_system(spec);
  const std::size_t m = t.diagonal.size();
  if (f.size() != m) throw std::invalid_argument("source profile must live on the limit grid");
  // Thomas elimination on the symmetric system with right-hand side W f
  std::vector<double> c(m, 0.0), d(m);
  double denom = t.diagonal[0];
  c[0] = m > 1 ? t.off_diagonal[0] / denom : 0.0;
  d[0] = t.weights[0] * f[0] / denom;
  for (std::size_t i = 1; i < m; ++i) {
    denom = t.diagonal[i] - t.off_diagonal[i - 1] * c[i - 1];
    if (i + 1 < m) c[i] = t.off_diagonal[i] / denom;
    d[i] = (t.weights[i] * f[i] - t.off_diagonal[i - 1] * d[i - 1]) / denom;
  }
  std::vector<double> u(m);
  u[m - 1] = d[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) u[i] = d[i] - c[i] * u[i + 1];
  return Profile(std::move(u));
}

std::vector<double> limit_eigenvalues(double mu, std::size_t k) {
  if (k < 1) throw std::invalid_argument("need at least one eigenvalue");
  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double w = static_cast<double>(j) * std::numbers::pi;
    out[j] = mu + w * w;
  }
  return out;
}

}  // namespace stlab
