#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "stlab/harness.hpp"
#include "stlab/limit1d.hpp"
#include "stlab/quantumgraph.hpp"

using namespace stlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("stl-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_config(const fs::path& dir, const std::string& json) {
  const auto p = dir / "config.json";
  std::ofstream(p) << json;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "stl");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

StudyConfig config_for(StudyKind kind, const std::string& json) {
  return parse_study_config(nlohmann::json::parse(json), kind);
}

}  // namespace

TEST_CASE("capacity study") {
  const auto r = run_capacity(config_for(StudyKind::Capacity, "{}"));
  REQUIRE(r.rows.size() == 3);
  CHECK(r.number(0, "mu") == doctest::Approx(1.5707963).epsilon(1e-7));
  CHECK(r.number(0, "mu_hat") == doctest::Approx(1.6755161).epsilon(1e-7));
  CHECK(r.number(2, "mu_hat") == doctest::Approx(1.5747331).epsilon(1e-7));
  CHECK(r.trends_pass());
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("# strange-term-lab v1\nN,delta,r,cell_energy,mu_hat,mu,relation_error\n", 0) == 0);
  const auto dir = scratch("capacity");
  CHECK(cli({"capacity", "--out", dir.string()}) == 0);
  CHECK(fs::exists(dir / "capacity.csv"));
  const auto summary = nlohmann::json::parse(slurp(dir / "capacity.json"));
  CHECK(summary["passed"] == true);
  CHECK(summary["rows"].size() == 3);
}

TEST_CASE("usage and configuration errors") {
  const auto dir = scratch("usage");
  CHECK(cli({"nonsense"}) == 2);
  CHECK(cli({}) == 2);
  CHECK(cli({"capacity", "--config", (dir / "missing.json").string()}) == 2);
  CHECK(cli({"capacity", "--config", write_config(dir, R"({"deltas": []})")}) == 2);
  CHECK(cli({"rod-spectrum", "--config", write_config(dir, R"({"eigen_count": 0})")}) == 2);
  CHECK(cli({"rod-spectrum", "--config", write_config(dir, R"({"z": 2.0})")}) == 2);
  CHECK(cli({"rod-convergence", "--config", write_config(dir, R"({"ladder": []})")}) == 2);
  CHECK(cli({"rod-convergence", "--config", write_config(dir, R"({"ladder": [0.35, 0.5]})")}) == 2);
  CHECK(cli({"rod-convergence", "--config", write_config(dir, R"({"h_factor": 0.7, "ladder": [1.0]})")}) == 2);
  CHECK(cli({"resolvent-probe", "--config", write_config(dir, R"({"ladder": [0.5], "probe_modes": 0})")}) == 2);
  CHECK(cli({"graph-limit"}) == 2);
  CHECK(cli({"capacity", "--config", write_config(dir, R"({"study": "regime"})")}) == 2);
  CHECK(cli({"capacity", "--config", write_config(dir, "{ not json")}) == 2);
  CHECK(cli({"capacity", "--threads", "0"}) == 2);
  CHECK_THROWS_AS(config_for(StudyKind::RodConvergence, R"({"delta_rule": "eps/3"})"), ConfigError);
  CHECK(config_for(StudyKind::RodConvergence, R"({"delta_rule": "eps/4"})").delta_ratio == 0.25);
}

TEST_CASE("graph-limit study") {
  const auto dir = scratch("graph");
  const std::string cfg = write_config(dir, R"({"graph_file": ")" + std::string(STL_TEST_DATA) +
                                                R"(/star3.json", "eigen_count": 2, "n_per_unit_length": 100})");
  CHECK(cli({"graph-limit", "--config", cfg, "--out", dir.string()}) == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "graph-limit.json"));
  REQUIRE(summary["rows"].size() == 3);
  CHECK(summary["rows"][0]["condition"] == "kirchhoff");
  CHECK(summary["rows"][1]["condition"] == "dirichlet");
  CHECK(summary["rows"][2]["condition"] == "robin");
  CHECK(summary["rows"][2]["beta"].get<double>() == doctest::Approx(1 + std::numbers::pi / 2));
  // Kirchhoff with a constant source is the constant 1 / (z + mu).
  CHECK(summary["rows"][0]["u_max"].get<double>() == doctest::Approx(1 / (1 + std::numbers::pi / 2)).epsilon(1e-12));
  CHECK(fs::exists(dir / "graph-limit-borderline-profile.csv"));
  CHECK(slurp(dir / "graph-limit-small-vertex-profile.csv").rfind("edge_id,t,value\n", 0) == 0);

  const std::string bad = write_config(dir, R"({"graph_file": ")" + std::string(STL_TEST_DATA) + R"(/malformed.json"})");
  CHECK(cli({"graph-limit", "--config", bad}) == 2);
  try {
    load_graph_json(std::string(STL_TEST_DATA) + "/malformed.json");
    FAIL("malformed graph accepted");
  } catch (const GraphParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("regime study") {
  const auto r = run_regime(config_for(StudyKind::Regime, R"({"alphas": [1.0, 0.6666666666666666, 0.5],
      "sequence": [{"epsilon": 0.5, "vertex_scale": 0.5}, {"epsilon": 0.25, "vertex_scale": 0.25},
                   {"epsilon": 0.125, "vertex_scale": 0.125}]})"));
  REQUIRE(r.rows.size() == 4);
  CHECK(std::get<std::string>(r.rows[0][3]) == "small-vertex");
  CHECK(std::get<std::string>(r.rows[1][3]) == "borderline");
  CHECK(std::get<std::string>(r.rows[2][3]) == "large-vertex");
  CHECK(std::get<std::string>(r.rows[3][3]) == "small-vertex");
  CHECK(r.number(3, "alpha") == doctest::Approx(1.0));
}

TEST_CASE("rod convergence on a coarse ladder is deterministic") {
  const auto a = scratch("det-a"), b = scratch("det-b");
  const std::string cfg = write_config(a, R"({"ladder": [1.0, 0.8]})");
  CHECK(cli({"rod-convergence", "--config", cfg, "--out", a.string(), "--threads", "1"}) == 0);
  CHECK(cli({"rod-convergence", "--config", cfg, "--out", b.string(), "--threads", "1"}) == 0);
  CHECK(slurp(a / "rod-convergence.csv") == slurp(b / "rod-convergence.csv"));
  const auto r = run_rod_convergence(config_for(StudyKind::RodConvergence, R"({"ladder": [1.0, 0.8]})"));
  REQUIRE(r.rows.size() == 2);
  CHECK(r.number(0, "eps") > r.number(1, "eps"));
  CHECK(r.trends.at("apriori_bound"));
  // The single-point run reproduces the second row.
  const auto single = run_rod_convergence(config_for(StudyKind::RodConvergence, R"({"ladder": [0.8]})"));
  CHECK(single.rows[0] == r.rows[1]);
}

TEST_CASE("manufactured cosine limit on a hole-free rod") {
  const auto r = run_rod_convergence(config_for(StudyKind::RodConvergence,
      R"({"ladder": [0.5], "no_holes": true, "h_factor": 2.0, "source": {"type": "cosine", "mode": 1}, "cg_tol": 1e-12})"));
  // mu = 0 in the limit: the rod solution is the limit ODE solution on every section.
  CHECK(r.number(0, "l2_error_profile") <= 1e-9);
  CHECK(r.number(0, "l2_error_rod") <= 1e-9);
}

TEST_CASE("hole-free controls") {
  SUBCASE("spectrum matches 1 + (j pi)^2 within 10 h^2") {
    const auto r = run_rod_spectrum(config_for(StudyKind::RodSpectrum,
        R"({"ladder": [0.5], "no_holes": true, "h_factor": 4.0, "eigen_count": 2})"));
    CHECK(r.trends.at("control_within_10h2"));
    CHECK(r.number(0, "lambda_1") == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("resolvent probe is at the solver tolerance") {
    const auto r = run_resolvent_probe(config_for(StudyKind::ResolventProbe,
        R"({"ladder": [0.5], "no_holes": true, "h_factor": 4.0, "probe_modes": 1})"));
    CHECK(r.trends.at("control_within_10h2"));
    CHECK(r.number(0, "probe_max") <= 10 * std::pow(r.number(0, "h"), 2));
  }
  SUBCASE("a wrong limit mu trips the trend assertion") {
    const auto dir = scratch("trend");
    const std::string cfg = write_config(dir, R"({"ladder": [0.5], "no_holes": true, "h_factor": 4.0,
                                                   "probe_modes": 2, "limit_mu": 0.5})");
    CHECK(cli({"resolvent-probe", "--config", cfg, "--out", dir.string()}) == 0);
    CHECK(cli({"resolvent-probe", "--config", cfg, "--out", dir.string(), "--assert-trends"}) == 4);
  }
}

TEST_CASE("file sources") {
  const auto dir = scratch("file");
  std::ofstream(dir / "f.csv") << "t,value\n0,1\n0.5,1\n1,1\n";
  const auto r = run_rod_convergence(config_for(StudyKind::RodConvergence,
      R"({"ladder": [0.5], "no_holes": true, "h_factor": 4.0, "source": {"type": "file", "path": ")" +
          (dir / "f.csv").string() + R"("}})"));
  CHECK(r.number(0, "mean_profile") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(make_source({"file", 1.0, 1, (dir / "none.csv").string()}), ConfigError);
}
