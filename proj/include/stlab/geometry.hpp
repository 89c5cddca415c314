#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stlab/metric_graph.hpp"

namespace stlab {

using Point = std::vector<double>;

/// Thin rod (0, eps)^{N-1} x (0, 1) perforated by balls of radius
/// r = delta^{N/(N-2)} centred on the lattice delta*(1,...,1) + 2*delta*Z^N.
/// The last coordinate is the rod axis.
class PerforatedDomainSpec {
 public:
  /// Throws std::invalid_argument unless N >= 3, 0 < eps <= 1, 0 < delta < eps.
  PerforatedDomainSpec(int dimension, double epsilon, double delta);

  int dimension() const { return dimension_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double cross_section_side() const { return epsilon_; }
  double axis_length() const { return 1.0; }
  double hole_radius() const;

  /// Side length along axis d (cross-section side for d < N-1, axis length otherwise).
  double extent(int axis) const;
  /// |eps * Omega_0| = eps^{N-1}.
  double cross_section_volume() const;
  /// |Omega_eps| = eps^{N-1} * 1.
  double volume() const;
  /// True when eps / (2 delta) is a positive integer, i.e. the lattice cells
  /// tile the cross-section exactly.
  bool exact_tiling() const;

 private:
  int dimension_;
  double epsilon_;
  double delta_;
};

enum class PointClass { Outside, InHole, Fluid };

/// Hole centres: offset-lattice points whose distance to the boundary of the
/// rod is at least delta. Ordered lexicographically by coordinates.
std::vector<Point> hole_centers(const PerforatedDomainSpec& spec);

/// Number of admissible lattice coordinates along one axis, and the first one.
struct AxisLattice {
  std::size_t count = 0;
  double first = 0.0;
  double pitch = 0.0;
};
AxisLattice axis_lattice(const PerforatedDomainSpec& spec, int axis);

PointClass classify_point(const PerforatedDomainSpec& spec, std::span<const double> x);

/// Distance from x to the nearest hole centre; +inf if there are no holes.
double nearest_center_distance(const PerforatedDomainSpec& spec, std::span<const double> x);

/// Volume of the unit ball in R^N.
double unit_ball_volume(int dimension);

/// Exact (number of holes * |B_r|) / |Omega_eps|.
double hole_volume_fraction(const PerforatedDomainSpec& spec);

// ---------------------------------------------------------------------------
// Fattened graphs

enum class ScalingRegime { SmallVertex, LargeVertex, Borderline };

const char* to_string(ScalingRegime regime);

struct FattenedGraphSpec {
  /// Throws std::invalid_argument unless all scales and volumes are positive.
  FattenedGraphSpec(MetricGraph skeleton, double epsilon, double vertex_scale,
                    double vertex_volume, double cross_section_volume);

  MetricGraph skeleton;
  double epsilon;
  double vertex_scale;           // R_eps
  double vertex_volume;          // |V|
  double cross_section_volume;   // |Omega_0|

  double volume_ratio() const { return vertex_volume / cross_section_volume; }
  /// R_eps^N / eps^{N-1}.
  double scale_ratio(int dimension) const;
};

/// Regime for R_eps = eps^alpha: the sign of (N - 1 - N alpha).
/// Throws std::invalid_argument for alpha <= 0 or N < 3.
ScalingRegime scaling_regime(int dimension, double alpha);

/// Regime estimated from a sequence of fattened graphs with eps decreasing:
/// the log-log slope of R^N / eps^{N-1} against eps decides the limit.
/// Throws std::invalid_argument for fewer than two members.
ScalingRegime scaling_regime(int dimension, std::span<const FattenedGraphSpec> sequence);

}  // namespace stlab
