#include "stlab/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stlab {

double sphere_area(int dimension) {
  if (dimension < 2) throw std::invalid_argument("sphere area needs N >= 2");
  const double half = 0.5 * dimension;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double strange_term(int dimension) {
  if (dimension < 3) throw std::invalid_argument("strange term is defined for N >= 3");
  return std::ldexp(sphere_area(dimension) * (dimension - 2), -dimension);
}

CorrectorProfile::CorrectorProfile(int dimension, double hole_radius, double delta)
    : dimension_(dimension), radius_(hole_radius), delta_(delta) {
  if (dimension < 3) throw std::invalid_argument("corrector needs N >= 3");
  if (!(hole_radius > 0.0 && hole_radius < delta))
    throw std::invalid_argument("corrector needs 0 < r < delta");
  denom_ = std::pow(delta_, 2 - dimension_) - std::pow(radius_, 2 - dimension_);
}

CorrectorProfile CorrectorProfile::with_radius_law(int dimension, double delta) {
  if (dimension < 3) throw std::invalid_argument("corrector needs N >= 3");
  return CorrectorProfile(dimension, std::pow(delta, static_cast<double>(dimension) / (dimension - 2)),
                          delta);
}

bool CorrectorProfile::satisfies_radius_law() const {
  const double expected = std::pow(delta_, static_cast<double>(dimension_) / (dimension_ - 2));
  return std::abs(radius_ - expected) <= 1e-12 * expected;
}

double CorrectorProfile::value(double rho) const {
  if (rho <= radius_) return 0.0;
  if (rho >= delta_) return 1.0;
  const double w = (std::pow(rho, 2 - dimension_) - std::pow(radius_, 2 - dimension_)) / denom_;
  return std::clamp(w, 0.0, 1.0);
}

CorrectorProfile::Derivatives CorrectorProfile::derivatives(double rho) const {
  if (rho <= radius_ || rho >= delta_) return {value(rho), 0.0, 0.0};
  const double k = 2.0 - dimension_;
  return {value(rho), k * std::pow(rho, k - 1.0) / denom_,
          k * (k - 1.0) * std::pow(rho, k - 2.0) / denom_};
}

double cell_energy(const CorrectorProfile& profile) {
  const int n = profile.dimension();
  return sphere_area(n) * (n - 2) /
         (std::pow(profile.hole_radius(), 2 - n) - std::pow(profile.delta(), 2 - n));
}

double strange_term_estimate(const CorrectorProfile& profile) {
  if (!profile.satisfies_radius_law())
    throw std::invalid_argument("strange term estimate requires r = delta^{N/(N-2)}");
  return cell_energy(profile) / std::pow(2.0 * profile.delta(), profile.dimension());
}

}  // namespace stlab
