#pragma once

namespace stlab {

/// Surface area of the unit sphere in R^N, 2 pi^{N/2} / Gamma(N/2). Requires N >= 2.
double sphere_area(int dimension);

/// The strange term mu = 2^{-N} S_N (N - 2). Requires N >= 3.
double strange_term(int dimension);

/// Radial cut-off around one hole: 0 inside B_r, harmonic in the shell
/// r < rho < delta, 1 outside B_delta.
class CorrectorProfile {
 public:
  /// Throws std::invalid_argument unless N >= 3 and 0 < r < delta.
  CorrectorProfile(int dimension, double hole_radius, double delta);

  /// Profile with r = delta^{N/(N-2)}.
  static CorrectorProfile with_radius_law(int dimension, double delta);

  int dimension() const { return dimension_; }
  double hole_radius() const { return radius_; }
  double delta() const { return delta_; }
  /// True when r = delta^{N/(N-2)} to 1e-12 relative.
  bool satisfies_radius_law() const;

  double value(double rho) const;

  struct Derivatives {
    double value;
    double first;
    double second;
  };
  /// Analytic value, w' and w'' (zero outside the shell).
  Derivatives derivatives(double rho) const;

 private:
  int dimension_;
  double radius_;
  double delta_;
  double denom_;  // delta^{2-N} - r^{2-N}
};

inline double eval_w(const CorrectorProfile& profile, double rho) { return profile.value(rho); }

/// Dirichlet energy of the corrector over the shell, S_N (N-2) / (r^{2-N} - delta^{2-N}).
double cell_energy(const CorrectorProfile& profile);

/// cell_energy / (2 delta)^N, which equals mu / (1 - delta^2).
/// Throws std::invalid_argument if the profile violates the radius law.
double strange_term_estimate(const CorrectorProfile& profile);

}  // namespace stlab
