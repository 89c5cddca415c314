#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "stlab/corrector.hpp"

using namespace stlab;
using std::numbers::pi;

namespace {

// Shell energy S_N * int_r^delta |w'|^2 rho^{N-1} drho, integrated adaptively
// in s = log(rho) because the integrand concentrates near the hole.
double quadrature_energy(const CorrectorProfile& w) {
  const int n = w.dimension();
  auto integrand = [&](double s) {
    const double rho = std::exp(s);
    const double d = w.derivatives(rho).first;
    return d * d * std::pow(rho, n);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  return sphere_area(n) * GK::integrate(integrand, std::log(w.hole_radius()), std::log(w.delta()), 20, 1e-14);
}

}  // namespace

TEST_CASE("sphere areas") {
  CHECK(sphere_area(2) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(sphere_area(3) == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(sphere_area(4) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
  CHECK(sphere_area(5) == doctest::Approx(8 * pi * pi / 3).epsilon(1e-15));
}

TEST_CASE("strange term closed forms") {
  CHECK(std::abs(strange_term(3) - pi / 2) <= 1e-15);
  CHECK(std::abs(strange_term(4) - pi * pi / 4) <= 1e-15);
  CHECK(std::abs(strange_term(5) - pi * pi / 4) <= 1e-15);
  CHECK_THROWS_AS(strange_term(2), std::invalid_argument);
}

TEST_CASE("corrector values") {
  const CorrectorProfile w(3, 0.015625, 0.25);
  CHECK(eval_w(w, 0.015625) == 0.0);
  CHECK(eval_w(w, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval_w(w, 0.1) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(eval_w(w, 0.001) == 0.0);
  CHECK(eval_w(w, 0.4) == 1.0);
  CHECK(w.satisfies_radius_law());
  CHECK_FALSE(CorrectorProfile(3, 0.02, 0.25).satisfies_radius_law());
  CHECK_THROWS_AS(strange_term_estimate(CorrectorProfile(3, 0.02, 0.25)), std::invalid_argument);
}

TEST_CASE("corrector is radially harmonic in the shell") {
  for (int n : {3, 4, 5}) {
    const auto w = CorrectorProfile::with_radius_law(n, 0.3);
    for (double rho : {1.2 * w.hole_radius(), 0.5 * (w.hole_radius() + 0.3), 0.29}) {
      const auto d = w.derivatives(rho);
      const double h = 1e-5 * rho;
      CHECK(d.first == doctest::Approx((w.value(rho + h) - w.value(rho - h)) / (2 * h)).epsilon(1e-6));
      CHECK(std::abs(d.second + (n - 1) / rho * d.first) <= 1e-9 * std::abs(d.second));
    }
  }
}

TEST_CASE("cell energy closed form matches adaptive quadrature") {
  for (int n : {3, 4, 5})
    for (double delta : {0.25, 0.1, 0.05}) {
      const auto w = CorrectorProfile::with_radius_law(n, delta);
      const double closed = cell_energy(w);
      CAPTURE(n);
      CAPTURE(delta);
      CHECK(std::abs(closed - quadrature_energy(w)) <= 1e-9 * closed);
    }
}

TEST_CASE("cell energy limits") {
  const double r = 1e-3;
  const CorrectorProfile far(3, r, 1e3 * r);
  const double limit = sphere_area(3) * 1.0 * r;  // S_N (N-2) r^{N-2}
  CHECK(std::abs(cell_energy(far) - limit) <= 1.1e-3 * limit);
  CHECK(std::abs(quadrature_energy(far) - cell_energy(far)) <= 1e-6 * cell_energy(far));
  CHECK(cell_energy(CorrectorProfile(3, 1e-6, 0.25)) < cell_energy(CorrectorProfile(3, 1e-4, 0.25)));
}

TEST_CASE("strange-term estimate") {
  const double mu = strange_term(3);
  for (double delta : {0.25, 0.1, 0.05}) {
    const auto w = CorrectorProfile::with_radius_law(3, delta);
    const double est = strange_term_estimate(w);
    CHECK(std::abs(est * (1 - delta * delta) - mu) <= 1e-12 * mu);
    CHECK(std::abs(est - quadrature_energy(w) / std::pow(2 * delta, 3)) <= 1e-9 * est);
    CHECK(std::abs(est - mu) <= mu * delta * delta / (1 - delta * delta) * (1 + 1e-12));
  }
  CHECK(strange_term_estimate(CorrectorProfile::with_radius_law(3, 0.25)) == doctest::Approx(1.6755161).epsilon(1e-7));
  CHECK(strange_term_estimate(CorrectorProfile::with_radius_law(3, 0.05)) == doctest::Approx(1.5747331).epsilon(1e-7));
}
