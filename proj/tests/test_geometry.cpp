#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "stlab/geometry.hpp"

using namespace stlab;

namespace {

// Enumerates delta + 2 delta k on a generous index range and keeps the points
// whose distance to every face is at least delta.
std::vector<Point> brute_force_centers(const PerforatedDomainSpec& s) {
  const int n = s.dimension();
  const double d = s.delta();
  std::vector<std::vector<double>> axis(n);
  for (int a = 0; a < n; ++a)
    for (int k = -4; k < 200; ++k) {
      const double x = d + 2.0 * d * k;
      const double L = s.extent(a);
      if (x > 0 && x < L && std::min(x, L - x) >= d - 1e-9) axis[a].push_back(x);
    }
  std::vector<Point> out{Point{}};
  for (int a = 0; a < n; ++a) {
    std::vector<Point> next;
    for (const auto& p : out)
      for (double x : axis[a]) {
        auto q = p;
        q.push_back(x);
        next.push_back(q);
      }
    out = next;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(PerforatedDomainSpec(2, 0.5, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(PerforatedDomainSpec(3, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(PerforatedDomainSpec(3, 1.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(PerforatedDomainSpec(3, 0.5, 0.5), std::invalid_argument);
  PerforatedDomainSpec s(3, 0.5, 0.25);
  CHECK(s.hole_radius() == doctest::Approx(0.015625).epsilon(1e-14));
  CHECK(s.cross_section_volume() == doctest::Approx(0.25));
  CHECK(s.exact_tiling());
  CHECK_FALSE(PerforatedDomainSpec(3, 0.5, 0.2).exact_tiling());
  CHECK(PerforatedDomainSpec(4, 0.5, 0.25).hole_radius() == doctest::Approx(0.0625));
}

TEST_CASE("single hole column for eps 0.5, delta 0.25") {
  const auto c = hole_centers(PerforatedDomainSpec(3, 0.5, 0.25));
  REQUIRE(c.size() == 2);
  CHECK(c[0] == Point{0.25, 0.25, 0.25});
  CHECK(c[1] == Point{0.25, 0.25, 0.75});
}

TEST_CASE("no centre clears a margin wider than half the section") {
  CHECK(hole_centers(PerforatedDomainSpec(3, 0.5, 0.4)).empty());
}

TEST_CASE("hole centres agree with brute-force lattice enumeration") {
  // eps = 1, delta = 0.25 gives offsets 0.25 and 0.75 per axis: 2 x 2 x 2.
  const PerforatedDomainSpec unit(3, 1.0, 0.25);
  CHECK(hole_centers(unit).size() == 8);
  for (const auto& s : {unit, PerforatedDomainSpec(3, 0.5, 0.25), PerforatedDomainSpec(3, 0.35, 0.175),
                        PerforatedDomainSpec(3, 0.5, 0.125), PerforatedDomainSpec(4, 0.6, 0.15),
                        PerforatedDomainSpec(3, 0.7, 0.2), PerforatedDomainSpec(5, 0.4, 0.1)}) {
    CAPTURE(s.epsilon());
    CAPTURE(s.delta());
    CHECK(hole_centers(s) == brute_force_centers(s));
  }
}

TEST_CASE("centres are symmetric under swapping cross-section axes") {
  const auto c = hole_centers(PerforatedDomainSpec(3, 0.5, 0.125));
  std::vector<Point> swapped;
  for (auto p : c) {
    std::swap(p[0], p[1]);
    swapped.push_back(p);
  }
  std::sort(swapped.begin(), swapped.end());
  CHECK(swapped == c);
}

TEST_CASE("point classification") {
  const PerforatedDomainSpec s(3, 0.5, 0.25);
  for (const auto& c : hole_centers(s)) {
    CHECK(classify_point(s, c) == PointClass::InHole);
    auto q = c;
    q[0] += s.delta();
    CHECK(classify_point(s, q) == PointClass::Fluid);
  }
  const Point mid{0.25, 0.25, 0.5};
  CHECK(classify_point(s, mid) == PointClass::Fluid);
  CHECK(nearest_center_distance(s, mid) == doctest::Approx(0.25));
  CHECK(classify_point(s, Point{0.25, 0.25, 1.5}) == PointClass::Outside);
  CHECK(classify_point(s, Point{-0.01, 0.25, 0.5}) == PointClass::Outside);
  CHECK(std::isinf(nearest_center_distance(PerforatedDomainSpec(3, 0.5, 0.4), mid)));
}

TEST_CASE("hole volume fraction matches Monte-Carlo classification") {
  std::mt19937_64 rng(12345);
  for (const auto& s : {PerforatedDomainSpec(3, 0.5, 0.25), PerforatedDomainSpec(3, 1.0, 0.5)}) {
    const double exact = hole_volume_fraction(s);
    const int samples = 10'000'000;
    std::uniform_real_distribution<double> cross(0.0, s.epsilon()), axial(0.0, 1.0);
    long hits = 0;
    Point x(3);
    for (int i = 0; i < samples; ++i) {
      x[0] = cross(rng);
      x[1] = cross(rng);
      x[2] = axial(rng);
      hits += classify_point(s, x) == PointClass::InHole;
    }
    const double p = static_cast<double>(hits) / samples;
    const double se = std::sqrt(exact * (1 - exact) / samples);
    CAPTURE(exact);
    CAPTURE(p);
    CHECK(std::abs(p - exact) <= 3.0 * se);
  }
  CHECK(hole_volume_fraction(PerforatedDomainSpec(3, 0.5, 0.25)) ==
        doctest::Approx(2.0 * (4.0 * std::numbers::pi / 3.0) * std::pow(0.015625, 3) / 0.25).epsilon(1e-13));
  CHECK(hole_volume_fraction(PerforatedDomainSpec(3, 0.5, 0.4)) == 0.0);
  const double f1 = hole_volume_fraction(PerforatedDomainSpec(3, 0.5, 0.25));
  const double f2 = hole_volume_fraction(PerforatedDomainSpec(3, 0.25, 0.125));
  const double f3 = hole_volume_fraction(PerforatedDomainSpec(3, 0.125, 0.0625));
  CHECK(f2 < f1);
  CHECK(f3 < f2);
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-14));
  CHECK(unit_ball_volume(4) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0).epsilon(1e-14));
}

TEST_CASE("scaling regimes from exponents") {
  CHECK(scaling_regime(3, 1.0) == ScalingRegime::SmallVertex);
  CHECK(scaling_regime(3, 2.0 / 3.0) == ScalingRegime::Borderline);
  CHECK(scaling_regime(3, 0.5) == ScalingRegime::LargeVertex);
  CHECK(scaling_regime(4, 0.75) == ScalingRegime::Borderline);
  CHECK_THROWS_AS(scaling_regime(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scaling_regime(3, -1.0), std::invalid_argument);
  CHECK(std::string(to_string(ScalingRegime::Borderline)) == "borderline");
}

TEST_CASE("scaling regimes from fattened-graph sequences") {
  const auto g = MetricGraph::path({1.0});
  auto seq = [&](double alpha) {
    std::vector<FattenedGraphSpec> out;
    for (double e : {0.5, 0.25, 0.125, 0.0625}) out.emplace_back(g, e, std::pow(e, alpha), 2.0, 1.0);
    return out;
  };
  CHECK(scaling_regime(3, seq(1.0)) == ScalingRegime::SmallVertex);
  CHECK(scaling_regime(3, seq(2.0 / 3.0)) == ScalingRegime::Borderline);
  CHECK(scaling_regime(3, seq(0.5)) == ScalingRegime::LargeVertex);
  CHECK(seq(1.0)[0].volume_ratio() == 2.0);
  CHECK(seq(1.0)[1].scale_ratio(3) == doctest::Approx(0.25));
  const auto one = seq(1.0);
  CHECK_THROWS_AS(scaling_regime(3, std::span(one.data(), 1)), std::invalid_argument);
  CHECK_THROWS_AS(FattenedGraphSpec(g, 0.5, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("metric graphs") {
  CHECK_THROWS_AS(MetricGraph({"a"}, {}), std::invalid_argument);
  CHECK_THROWS_AS(MetricGraph({"a", "b"}, {{0, 1, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(MetricGraph({"a", "b", "c"}, {{0, 1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(MetricGraph({"a", "b"}, {{0, 2, 1.0}}), std::invalid_argument);
  const auto star = MetricGraph::star({1.0, 2.0, 0.5});
  CHECK(star.vertex_count() == 4);
  CHECK(star.degree(0) == 3);
  CHECK(star.degree(2) == 1);
  CHECK(star.total_length() == doctest::Approx(3.5));
}
