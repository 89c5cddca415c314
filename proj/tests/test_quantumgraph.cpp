#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "stlab/limit1d.hpp"
#include "stlab/quantumgraph.hpp"

using namespace stlab;
using std::numbers::pi;

namespace {

const EdgeSource kOne = [](std::size_t, double) { return 1.0; };

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(lo) < 0) == (f(mid) < 0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double max_vertex_difference(const GraphProfile& a, const GraphProfile& b) {
  double d = 0.0;
  for (std::size_t e = 0; e < a.edge_values.size(); ++e)
    for (std::size_t i = 0; i < a.edge_values[e].size(); ++i)
      d = std::max(d, std::abs(a.edge_values[e][i] - b.edge_values[e][i]));
  return d;
}

}  // namespace

TEST_CASE("robin coefficient") {
  CHECK(robin_coefficient(1.0, pi / 2, 1.0) == doctest::Approx(2.5707963).epsilon(1e-8));
  CHECK(robin_coefficient(0.0, 0.0, 1.0) == 0.0);
  CHECK(robin_coefficient(1.0, pi / 2, 1e-12) < 1e-11);
  CHECK_THROWS_AS(robin_coefficient(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("single Kirchhoff edge reproduces the interval solver") {
  const auto g = MetricGraph::path({1.0});
  const EdgeSource f = [](std::size_t, double s) { return 1.0 + std::cos(pi * s) + s * s; };
  const auto u = solve_graph_poisson(g, Kirchhoff{}, f, 1.0, pi / 2, 200);
  const Profile ref = solve_limit_ode({pi / 2, 1.0, 200}, Profile::sample(200, [](double t) { return 1.0 + std::cos(pi * t) + t * t; }));
  REQUIRE(u.edge_values[0].size() == 201);
  for (std::size_t i = 0; i <= 200; ++i) CHECK(std::abs(u.edge_values[0][i] - ref[i]) <= 1e-10);
  CHECK(u.vertex_values[0] == u.edge_values[0][0]);
  const auto c = solve_graph_poisson(g, Kirchhoff{}, kOne, 1.0, pi / 2, 50);
  for (double v : c.edge_values[0]) CHECK(std::abs(v - 1.0 / (1.0 + pi / 2)) <= 1e-12);
}

TEST_CASE("gluing invariance") {
  // Source defined by arc length along the unit interval; the split path
  // measures the second edge from t = 0.5.
  auto src = [](double t) { return std::cos(3 * t) + t; };
  const EdgeSource whole = [&](std::size_t, double s) { return src(s); };
  const EdgeSource split = [&](std::size_t e, double s) { return src(0.5 * e + s); };
  const auto single = MetricGraph::path({1.0});
  const auto glued = MetricGraph::path({0.5, 0.5});
  for (const VertexCondition& c : std::vector<VertexCondition>{Kirchhoff{}, Robin{{0.7, 0.0, 0.7}}}) {
    VertexCondition c1 = c;
    if (const auto* r = std::get_if<Robin>(&c)) c1 = Robin{{r->beta[0], r->beta[2]}};
    const auto a = solve_graph_poisson(single, c1, whole, 1.0, pi / 2, 100);
    const auto b = solve_graph_poisson(glued, c, split, 1.0, pi / 2, 100);
    REQUIRE(b.edge_values[0].size() == 51);
    for (std::size_t i = 0; i <= 50; ++i) {
      CHECK(std::abs(a.edge_values[0][i] - b.edge_values[0][i]) <= 1e-10);
      CHECK(std::abs(a.edge_values[0][50 + i] - b.edge_values[1][i]) <= 1e-10);
    }
  }
}

TEST_CASE("decoupled Dirichlet edge matches the closed form") {
  const auto g = MetricGraph::path({1.0});
  const auto u = solve_graph_poisson(g, DirichletDecoupled{}, kOne, 1.0, pi / 2, 400);
  const double w = std::sqrt(1.0 + pi / 2);
  CHECK(u.vertex_values[0] == 0.0);
  CHECK(u.edge_values[0].front() == 0.0);
  CHECK(u.edge_values[0].back() == 0.0);
  for (std::size_t i = 0; i <= 400; i += 40) {
    const double t = i / 400.0;
    const double exact = (1 - std::cosh(w * (t - 0.5)) / std::cosh(w / 2)) / (w * w);
    CHECK(std::abs(u.edge_values[0][i] - exact) <= 1e-6);
  }
  CHECK(u.edge_values[0][200] == doctest::Approx(0.09847).epsilon(1e-4));
  // Edges decouple: a star gives the same profile on every unit edge.
  const auto star = solve_graph_poisson(MetricGraph::star({1.0, 1.0, 1.0}), DirichletDecoupled{}, kOne, 1.0, pi / 2, 400);
  for (std::size_t e = 0; e < 3; ++e)
    CHECK(std::abs(star.edge_values[e][200] - u.edge_values[0][200]) <= 1e-12);
}

TEST_CASE("condition equivalences") {
  const auto g = MetricGraph::star({1.0, 0.5, 2.0});
  const EdgeSource f = [](std::size_t e, double s) { return 1.0 + e * std::sin(s); };
  const auto kir = solve_graph_poisson(g, Kirchhoff{}, f, 1.0, pi / 2, 80);
  const auto rob0 = solve_graph_poisson(g, uniform_robin(g, 0.0), f, 1.0, pi / 2, 80);
  CHECK(max_vertex_difference(kir, rob0) <= 1e-12);

  const auto lk = graph_eigenvalues(g, Kirchhoff{}, 4, 80, pi / 2);
  const auto lr = graph_eigenvalues(g, uniform_robin(g, 0.0), 4, 80, pi / 2);
  const auto ls = graph_eigenvalues(g, uniform_spectral_robin(g, 0.0), 4, 80, pi / 2);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(lk[j] - lr[j]) <= 1e-10);
    CHECK(std::abs(lk[j] - ls[j]) <= 1e-10);
  }
  CHECK(std::abs(lk[0] - pi / 2) <= 1e-9);
  for (double l : lk) CHECK(l >= pi / 2 - 1e-9);
}

TEST_CASE("Kirchhoff spectrum of an interval") {
  const auto g = MetricGraph::path({1.0});
  const auto l = graph_eigenvalues(g, Kirchhoff{}, 3, 400, pi / 2);
  const auto ref = limit_eigenvalues(pi / 2, 3);
  const double h = 1.0 / 400;
  for (int j = 0; j < 3; ++j) CHECK(std::abs(l[j] - ref[j]) <= std::pow(j * pi, 4) * h * h / 12 * 1.01 + 1e-9);
}

TEST_CASE("spectral Robin interval against the secular equations") {
  // u'' + lambda u = 0 with vertex mass q = 1 at both ends. With x = sqrt(lambda)/2,
  // odd modes solve x tan x = 1/2 and even modes tan x = -2x.
  const double odd = bisect([](double x) { return x * std::tan(x) - 0.5; }, 0.1, 1.5);
  const double even = bisect([](double x) { return std::tan(x) + 2 * x; }, 1.6, 3.0);
  CHECK(4 * odd * odd == doctest::Approx(1.70705297555).epsilon(1e-10));
  CHECK(4 * even * even == doctest::Approx(13.4923571465).epsilon(1e-10));

  const auto g = MetricGraph::path({1.0});
  const auto q1 = uniform_spectral_robin(g, 1.0);
  // n = 2000 exceeds the dense threshold, so this runs the block iteration.
  const auto fine = graph_eigenvalues(g, q1, 3, 2000);
  CHECK(std::abs(fine[0]) <= 1e-8);
  CHECK(std::abs(fine[1] - 1.70705297555) <= 1e-5);
  CHECK(std::abs(fine[2] - 13.4923571465) <= 1e-4);
  // Dense path at n = 1000 agrees to discretisation accuracy and converges.
  const auto coarse = graph_eigenvalues(g, q1, 3, 1000);
  CHECK(std::abs(coarse[2] - 13.4923571465) > std::abs(fine[2] - 13.4923571465));
}

TEST_CASE("iterative and dense graph eigensolvers agree") {
  const auto g = MetricGraph::star({1.0, 1.0, 1.0});
  for (const VertexCondition& c : std::vector<VertexCondition>{uniform_robin(g, 2.0), uniform_spectral_robin(g, 0.5),
                                                                DirichletDecoupled{}}) {
    const auto dense = graph_eigenvalues(g, c, 4, 300, pi / 2, GraphEigenSolver::Dense);
    const auto iter = graph_eigenvalues(g, c, 4, 300, pi / 2, GraphEigenSolver::Iterative);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(dense[j] - iter[j]) <= 1e-8 * dense[j]);
  }
}

TEST_CASE("Robin ground state is monotone in beta") {
  const auto g = MetricGraph::star({1.0, 1.0, 1.0});
  double prev = -1.0;
  for (double beta : {0.0, 1.0, 2.57, 10.0, 1e6}) {
    const double l = graph_eigenvalues(g, uniform_robin(g, beta), 1, 200, pi / 2)[0];
    CHECK(l >= prev);
    prev = l;
  }
  const double dir = graph_eigenvalues(g, DirichletDecoupled{}, 1, 200, pi / 2)[0];
  CHECK(prev <= dir + 1e-12);
  CHECK(prev >= dir - 1e-3);
}

TEST_CASE("Kirchhoff flux balance") {
  const auto g = MetricGraph::star({1.0, 0.7, 1.3});
  const EdgeSource f = [](std::size_t e, double s) { return std::cos(s * (e + 1)); };
  double prev = 1e9;
  for (double n : {100.0, 200.0, 400.0}) {
    const auto u = solve_graph_poisson(g, Kirchhoff{}, f, 1.0, pi / 2, n);
    const double flux = std::abs(vertex_flux_sum(g, u, 0));
    CHECK(flux <= 10.0 / n);
    CHECK(flux < prev);
    prev = flux;
  }
}

TEST_CASE("regimes map to vertex conditions") {
  const auto g = MetricGraph::star({1.0, 1.0, 1.0});
  CHECK(std::holds_alternative<Kirchhoff>(limit_problem_for_regime(ScalingRegime::SmallVertex, g, 1.0, pi / 2, 1.0).condition));
  CHECK(std::holds_alternative<DirichletDecoupled>(limit_problem_for_regime(ScalingRegime::LargeVertex, g, 1.0, pi / 2, 1.0).condition));
  const auto b = limit_problem_for_regime(ScalingRegime::Borderline, g, 1.0, pi / 2, 2.0);
  REQUIRE(std::holds_alternative<Robin>(b.condition));
  for (double beta : std::get<Robin>(b.condition).beta) CHECK(beta == doctest::Approx(2 * (1 + pi / 2)));
  CHECK(b.mu == pi / 2);
}

TEST_CASE("invalid graph problems") {
  const auto g = MetricGraph::path({1.0, 1.0});
  CHECK_THROWS_AS(solve_graph_poisson(g, uniform_spectral_robin(g, 1.0), kOne, 1.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(solve_graph_poisson(g, Robin{{1.0}}, kOne, 1.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(solve_graph_poisson(g, Kirchhoff{}, kOne, 0.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(graph_eigenvalues(g, SpectralRobin{{1.0}}, 2, 10), std::invalid_argument);
  CHECK(edge_intervals(0.5, 200) == 100);
  CHECK(edge_intervals(0.01, 200) == 4);
  CHECK(edge_intervals(0.333, 10) == 4);
  CHECK(edge_intervals(1.0, 10.5) == 11);
}

TEST_CASE("graph JSON") {
  const auto d = parse_graph_json(R"({"vertices": ["c", "a", "b"],
    "edges": [{"tail": "c", "head": "a", "length": 1.0}, {"tail": "c", "head": "b", "length": 0.5}],
    "condition": {"type": "robin", "params": {"beta": 2.0}}})");
  CHECK(d.graph.vertex_count() == 3);
  CHECK(d.graph.edge(1).length == 0.5);
  REQUIRE(d.condition.has_value());
  CHECK(std::get<Robin>(*d.condition).beta == std::vector<double>{2.0, 2.0, 2.0});

  const auto numeric = parse_graph_json(R"({"vertices": [1, 2], "edges": [{"tail": 1, "head": 2, "length": 2}]})");
  CHECK(numeric.graph.vertex_id(1) == "2");
  CHECK_FALSE(numeric.condition.has_value());

  try {
    parse_graph_json("{\n  \"vertices\": [\"a\"],\n  \"edges\": [\n    {\"tail\": \"a\",, }\n  ]\n}");
    FAIL("malformed JSON accepted");
  } catch (const GraphParseError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_graph_json(R"({"vertices": ["a"], "edges": [{"tail": "a", "head": "x", "length": 1}]})"), GraphParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"vertices": ["a", "b"], "edges": [{"tail": "a", "head": "b", "length": 0}]})"), GraphParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"vertices": ["a", "b"], "edges": [{"tail": "a", "head": "b", "length": 1}],
    "condition": {"type": "neumann"}})"), GraphParseError);
}

TEST_CASE("graph profile CSV") {
  const auto g = MetricGraph::path({1.0});
  const auto u = solve_graph_poisson(g, Kirchhoff{}, kOne, 1.0, 0.0, 4);
  std::ostringstream os;
  write_csv(os, g, u);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "edge_id,t,value");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 5);
}
