#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace stlab {

/// Grid function on a uniform grid over [0, 1] (nodes k / n, k = 0..n).
class Profile {
 public:
  Profile() = default;
  /// Throws std::invalid_argument for fewer than two nodes or non-finite values.
  explicit Profile(std::vector<double> values);

  static Profile sample(std::size_t intervals, const std::function<double(double)>& g);
  static Profile constant(std::size_t intervals, double c);

  std::size_t intervals() const { return values_.empty() ? 0 : values_.size() - 1; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return 1.0 / static_cast<double>(intervals()); }
  double node(std::size_t k) const;

  /// Piecewise-linear interpolant, clamped to [0, 1].
  double operator()(double t) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  /// Trapezoidal integral over (0, 1).
  double integral() const;
  /// Trapezoidal L2(0,1) norm.
  double l2_norm() const;

 private:
  std::vector<double> values_;
};

/// Trapezoidal L2 distance. Profiles on different grids are compared on the
/// finer grid through linear interpolation.
double l2_distance(const Profile& a, const Profile& b);
double max_abs_difference(const Profile& a, const Profile& b);

/// Two-column CSV "t,value".
void write_csv(std::ostream& os, const Profile& profile);

}  // namespace stlab
