#include "stlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace stlab {

namespace {
constexpr double kLatticeTol = 1e-9;
}

PerforatedDomainSpec::PerforatedDomainSpec(int dimension, double epsilon, double delta)
    : dimension_(dimension), epsilon_(epsilon), delta_(delta) {
  if (dimension < 3) throw std::invalid_argument("dimension must be at least 3");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta < epsilon)) throw std::invalid_argument("delta must lie in (0, epsilon)");
}

double PerforatedDomainSpec::hole_radius() const {
  return std::pow(delta_, static_cast<double>(dimension_) / (dimension_ - 2));
}

double PerforatedDomainSpec::extent(int axis) const {
  if (axis < 0 || axis >= dimension_) throw std::out_of_range("axis out of range");
  return axis == dimension_ - 1 ? axis_length() : epsilon_;
}

double PerforatedDomainSpec::cross_section_volume() const {
  return std::pow(epsilon_, dimension_ - 1);
}

double PerforatedDomainSpec::volume() const { return cross_section_volume() * axis_length(); }

bool PerforatedDomainSpec::exact_tiling() const {
  const double cells = epsilon_ / (2.0 * delta_);
  return cells >= 1.0 - kLatticeTol && std::abs(cells - std::round(cells)) <= kLatticeTol * cells;
}

AxisLattice axis_lattice(const PerforatedDomainSpec& spec, int axis) {
  const double extent = spec.extent(axis);
  const double delta = spec.delta();
  AxisLattice lattice{0, delta, 2.0 * delta};
  // centres delta + 2 delta k with extent - centre >= delta
  const double span = (extent - 2.0 * delta) / (2.0 * delta);
  if (span >= -kLatticeTol) lattice.count = static_cast<std::size_t>(std::floor(span + kLatticeTol)) + 1;
  return lattice;
}

std::vector<Point> hole_centers(const PerforatedDomainSpec& spec) {
  const int n = spec.dimension();
  std::vector<AxisLattice> axes;
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) {
    axes.push_back(axis_lattice(spec, d));
    total *= axes.back().count;
  }
  std::vector<Point> centers;
  if (total == 0) return centers;
  centers.reserve(total);
  // odometer with axis 0 most significant gives lexicographic order
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t c = 0; c < total; ++c) {
    Point p(n);
    for (int d = 0; d < n; ++d) p[d] = axes[d].first + axes[d].pitch * static_cast<double>(idx[d]);
    centers.push_back(std::move(p));
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[d] < axes[d].count) break;
      idx[d] = 0;
    }
  }
  return centers;
}

double nearest_center_distance(const PerforatedDomainSpec& spec, std::span<const double> x) {
  const int n = spec.dimension();
  double dist2 = 0.0;
  for (int d = 0; d < n; ++d) {
    const auto lattice = axis_lattice(spec, d);
    if (lattice.count == 0) return std::numeric_limits<double>::infinity();
    // distance is separable, so the nearest centre is the per-axis nearest one
    double k = std::round((x[d] - lattice.first) / lattice.pitch);
    k = std::clamp(k, 0.0, static_cast<double>(lattice.count - 1));
    const double diff = x[d] - (lattice.first + lattice.pitch * k);
    dist2 += diff * diff;
  }
  return std::sqrt(dist2);
}

PointClass classify_point(const PerforatedDomainSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dimension())
    throw std::invalid_argument("point dimension does not match the domain");
  for (int d = 0; d < spec.dimension(); ++d)
    if (!(x[d] >= 0.0 && x[d] <= spec.extent(d))) return PointClass::Outside;
  return nearest_center_distance(spec, x) <= spec.hole_radius() ? PointClass::InHole
                                                                 : PointClass::Fluid;
}

double unit_ball_volume(int dimension) {
  const double half = 0.5 * dimension;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double hole_volume_fraction(const PerforatedDomainSpec& spec) {
  std::size_t holes = 1;
  for (int d = 0; d < spec.dimension(); ++d) holes *= axis_lattice(spec, d).count;
  const double ball = unit_ball_volume(spec.dimension()) * std::pow(spec.hole_radius(), spec.dimension());
  return static_cast<double>(holes) * ball / spec.volume();
}

const char* to_string(ScalingRegime regime) {
  switch (regime) {
    case ScalingRegime::SmallVertex: return "small-vertex";
    case ScalingRegime::LargeVertex: return "large-vertex";
    case ScalingRegime::Borderline: return "borderline";
  }
  return "unknown";
}

FattenedGraphSpec::FattenedGraphSpec(MetricGraph graph, double eps, double r_eps, double v_volume,
                                     double omega0_volume)
    : skeleton(std::move(graph)),
      epsilon(eps),
      vertex_scale(r_eps),
      vertex_volume(v_volume),
      cross_section_volume(omega0_volume) {
  if (!(eps > 0.0 && r_eps > 0.0 && v_volume > 0.0 && omega0_volume > 0.0))
    throw std::invalid_argument("fattened graph scales and volumes must be positive");
}

double FattenedGraphSpec::scale_ratio(int dimension) const {
  return std::pow(vertex_scale, dimension) / std::pow(epsilon, dimension - 1);
}

ScalingRegime scaling_regime(int dimension, double alpha) {
  if (dimension < 3) throw std::invalid_argument("dimension must be at least 3");
  if (!(alpha > 0.0)) throw std::invalid_argument("vertex scaling exponent must be positive");
  // R^N / eps^{N-1} = eps^{N alpha - (N-1)}
  const double exponent = dimension * alpha - (dimension - 1);
  constexpr double tol = 1e-12;
  if (exponent > tol) return ScalingRegime::SmallVertex;
  if (exponent < -tol) return ScalingRegime::LargeVertex;
  return ScalingRegime::Borderline;
}

ScalingRegime scaling_regime(int dimension, std::span<const FattenedGraphSpec> sequence) {
  if (dimension < 3) throw std::invalid_argument("dimension must be at least 3");
  if (sequence.size() < 2) throw std::invalid_argument("need at least two members to estimate a limit");
  // least-squares slope of log(ratio) against log(eps)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(sequence.size());
  for (const auto& g : sequence) {
    const double lx = std::log(g.epsilon);
    const double ly = std::log(g.scale_ratio(dimension));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw std::invalid_argument("sequence needs distinct eps values");
  const double slope = (m * sxy - sx * sy) / denom;
  constexpr double tol = 0.05;
  if (slope > tol) return ScalingRegime::SmallVertex;
  if (slope < -tol) return ScalingRegime::LargeVertex;
  return ScalingRegime::Borderline;
}

}  // namespace stlab
