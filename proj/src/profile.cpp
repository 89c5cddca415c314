#include "stlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace stlab {

Profile::Profile(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("profile needs at least two nodes");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("profile values must be finite");
}

Profile Profile::sample(std::size_t intervals, const std::function<double(double)>& g) {
  if (intervals < 1) throw std::invalid_argument("profile needs at least one interval");
  std::vector<double> v(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k)
    v[k] = g(k == intervals ? 1.0 : static_cast<double>(k) / static_cast<double>(intervals));
  return Profile(std::move(v));
}

Profile Profile::constant(std::size_t intervals, double c) {
  return Profile(std::vector<double>(intervals + 1, c));
}

double Profile::node(std::size_t k) const {
  return k == intervals() ? 1.0 : static_cast<double>(k) / static_cast<double>(intervals());
}

double Profile::operator()(double t) const {
  const std::size_t n = intervals();
  const double s = std::clamp(t, 0.0, 1.0) * static_cast<double>(n);
  const std::size_t k = std::min(static_cast<std::size_t>(s), n - 1);
  const double theta = s - static_cast<double>(k);
  if (theta == 0.0) return values_[k];
  return (1.0 - theta) * values_[k] + theta * values_[k + 1];
}

double Profile::integral() const {
  double s = 0.5 * (values_.front() + values_.back());
  for (std::size_t k = 1; k + 1 < values_.size(); ++k) s += values_[k];
  return s * spacing();
}

double Profile::l2_norm() const {
  double s = 0.5 * (values_.front() * values_.front() + values_.back() * values_.back());
  for (std::size_t k = 1; k + 1 < values_.size(); ++k) s += values_[k] * values_[k];
  return std::sqrt(s * spacing());
}

namespace {
std::vector<double> difference_on_finer(const Profile& a, const Profile& b) {
  const Profile& fine = a.intervals() >= b.intervals() ? a : b;
  std::vector<double> d(fine.size());
  for (std::size_t k = 0; k < fine.size(); ++k) {
    const double t = fine.node(k);
    d[k] = a(t) - b(t);
  }
  return d;
}
}  // namespace

double l2_distance(const Profile& a, const Profile& b) {
  return Profile(difference_on_finer(a, b)).l2_norm();
}

double max_abs_difference(const Profile& a, const Profile& b) {
  double m = 0.0;
  for (double v : difference_on_finer(a, b)) m = std::max(m, std::abs(v));
  return m;
}

void write_csv(std::ostream& os, const Profile& profile) {
  os << "t,value\n" << std::setprecision(17);
  for (std::size_t k = 0; k < profile.size(); ++k) os << profile.node(k) << ',' << profile[k] << '\n';
}

}  // namespace stlab
