#include "stlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "stlab/corrector.hpp"
#include "stlab/geometry.hpp"
#include "stlab/grid.hpp"
#include "stlab/grid_operator.hpp"
#include "stlab/identification.hpp"
#include "stlab/limit1d.hpp"
#include "stlab/parallel.hpp"
#include "stlab/profile.hpp"
#include "stlab/quantumgraph.hpp"
#include "stlab/solvers.hpp"

namespace stlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const std::vector<std::pair<StudyKind, const char*>> kStudyNames = {
    {StudyKind::Capacity, "capacity"},           {StudyKind::RodConvergence, "rod-convergence"},
    {StudyKind::RodSpectrum, "rod-spectrum"},    {StudyKind::ResolventProbe, "resolvent-probe"},
    {StudyKind::GraphLimit, "graph-limit"},      {StudyKind::Regime, "regime"},
};

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Rod geometry for one ladder entry.
struct Rod {
  PerforatedDomainSpec spec;
  std::shared_ptr<const StructuredGrid> grid;
  std::size_t axial_intervals;
  double h;  // largest actual spacing
};

Rod make_rod(const StudyConfig& c, double eps) {
  PerforatedDomainSpec spec(c.dimension, eps, c.delta_ratio * eps);
  const double target = c.h_factor * spec.hole_radius();
  auto grid = c.no_holes ? StructuredGrid::box(c.dimension, eps, target) : StructuredGrid::build(spec, target);
  const auto sp = grid->spacing();
  return Rod{spec, grid, grid->counts().back() - 1, *std::max_element(sp.begin(), sp.end())};
}

std::vector<Cell> rod_cells(const Rod& rod) {
  return {rod.spec.epsilon(), rod.spec.delta(), rod.spec.hole_radius(),
          static_cast<std::int64_t>(rod.grid->fluid_count()), rod.h};
}

const std::vector<std::string> kRodColumns = {"eps", "delta", "r", "unknowns", "h"};

template <typename F>
auto with_eps_context(double eps, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const NonConvergence& e) {
    throw NonConvergence("eps=" + format_double(eps) + ": " + e.what(), e.iterations(), e.residual(),
                         e.pair_residuals());
  }
}

std::vector<double> column_values(const StudyReport& r, const std::string& name) {
  std::vector<double> out;
  for (std::size_t i = 0; i < r.rows.size(); ++i) out.push_back(r.number(i, name));
  return out;
}

Profile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("source file not readable: " + path);
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double t, v;
    if (ss >> t >> v) pts.emplace_back(t, v);
  }
  if (pts.size() < 2) throw ConfigError("source file needs at least two (t, value) rows: " + path);
  std::sort(pts.begin(), pts.end());
  if (pts.front().first > 0.0 || pts.back().first < 1.0) throw ConfigError("source file must cover [0, 1]: " + path);
  std::vector<double> values;
  // Resample onto a fine uniform grid by piecewise-linear interpolation.
  const std::size_t n = 4096;
  std::size_t j = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / n;
    while (j + 2 < pts.size() && pts[j + 1].first < t) ++j;
    const auto [t0, v0] = pts[j];
    const auto [t1, v1] = pts[j + 1];
    const double s = t1 > t0 ? std::clamp((t - t0) / (t1 - t0), 0.0, 1.0) : 0.0;
    values.push_back(v0 + s * (v1 - v0));
  }
  return Profile(std::move(values));
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

const char* to_string(StudyKind kind) {
  for (const auto& [k, name] : kStudyNames)
    if (k == kind) return name;
  return "unknown";
}

StudyKind parse_study_kind(const std::string& name) {
  for (const auto& [k, n] : kStudyNames)
    if (name == n) return k;
  throw ConfigError("unknown study '" + name + "'");
}

void StudyConfig::validate() const {
  if (dimension < 3) throw ConfigError("dimension must be >= 3");
  if (!(z > 0.0)) throw ConfigError("z must be positive");
  if (!(h_factor > 0.0)) throw ConfigError("h_factor must be positive");
  if (!(cg_tol > 0.0) || !(eigen_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (delta_ratio != 0.5 && delta_ratio != 0.25) throw ConfigError("delta_rule must be eps/2 or eps/4");
  if (source.type != "constant" && source.type != "cosine" && source.type != "file")
    throw ConfigError("source.type must be constant, cosine or file");
  if (source.type == "cosine" && source.mode < 0) throw ConfigError("source.mode must be >= 0");
  if (limit_mu && !(*limit_mu >= 0.0)) throw ConfigError("limit_mu must be >= 0");
  switch (kind) {
    case StudyKind::Capacity:
      if (deltas.empty()) throw ConfigError("capacity study needs a non-empty delta sweep");
      for (double d : deltas)
        if (!(d > 0.0 && d < 1.0)) throw ConfigError("capacity deltas must lie in (0, 1)");
      break;
    case StudyKind::RodConvergence:
    case StudyKind::RodSpectrum:
    case StudyKind::ResolventProbe:
      if (ladder.empty()) throw ConfigError("empty eps ladder");
      if (!strictly_decreasing(ladder)) throw ConfigError("eps ladder must be strictly decreasing");
      for (double e : ladder)
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError("ladder entries must lie in (0, 1]");
      if (kind == StudyKind::RodSpectrum) {
        if (eigen_count == 0) throw ConfigError("eigen_count must be >= 1");
        if (z != 1.0) throw ConfigError("rod-spectrum requires z = 1");
      }
      if (kind == StudyKind::ResolventProbe && probe_modes == 0) throw ConfigError("probe_modes must be >= 1");
      break;
    case StudyKind::GraphLimit:
      if (graph_file.empty()) throw ConfigError("graph-limit needs graph_file");
      if (!(n_per_unit_length > 0.0)) throw ConfigError("n_per_unit_length must be positive");
      if (!(vol_ratio > 0.0)) throw ConfigError("vol_ratio must be positive");
      if (regimes.empty()) throw ConfigError("graph-limit needs at least one regime");
      break;
    case StudyKind::Regime:
      if (alphas.empty() && sequence.size() < 2) throw ConfigError("regime study needs alphas or a sequence of >= 2 members");
      break;
  }
}

double StudyConfig::effective_limit_mu() const {
  if (limit_mu) return *limit_mu;
  return no_holes ? 0.0 : strange_term(dimension);
}

StudyConfig parse_study_config(const nlohmann::json& doc, StudyKind kind) {
  StudyConfig c;
  c.kind = kind;
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  try {
    if (doc.contains("study") && parse_study_kind(doc["study"].get<std::string>()) != kind)
      throw ConfigError("config is for study '" + doc["study"].get<std::string>() + "'");
    c.dimension = doc.value("dimension", c.dimension);
    if (doc.contains("ladder")) c.ladder = doc["ladder"].get<std::vector<double>>();
    if (doc.contains("delta_rule")) {
      const auto rule = doc["delta_rule"].get<std::string>();
      if (rule == "eps/2") c.delta_ratio = 0.5;
      else if (rule == "eps/4") c.delta_ratio = 0.25;
      else throw ConfigError("delta_rule must be \"eps/2\" or \"eps/4\"");
    }
    if (doc.contains("deltas")) c.deltas = doc["deltas"].get<std::vector<double>>();
    c.z = doc.value("z", c.z);
    if (doc.contains("source")) {
      const auto& s = doc["source"];
      c.source.type = s.value("type", c.source.type);
      c.source.value = s.value("value", c.source.value);
      c.source.mode = s.value("mode", c.source.mode);
      c.source.path = s.value("path", c.source.path);
    }
    c.h_factor = doc.value("h_factor", c.h_factor);
    c.cg_tol = doc.value("cg_tol", c.cg_tol);
    c.eigen_tol = doc.value("eigen_tol", c.eigen_tol);
    c.eigen_count = doc.value("eigen_count", c.eigen_count);
    c.probe_modes = doc.value("probe_modes", c.probe_modes);
    c.no_holes = doc.value("no_holes", c.no_holes);
    if (doc.contains("limit_mu") && !doc["limit_mu"].is_null()) c.limit_mu = doc["limit_mu"].get<double>();
    c.graph_file = doc.value("graph_file", c.graph_file);
    c.n_per_unit_length = doc.value("n_per_unit_length", c.n_per_unit_length);
    c.vol_ratio = doc.value("vol_ratio", c.vol_ratio);
    if (doc.contains("regimes")) c.regimes = doc["regimes"].get<std::vector<std::string>>();
    if (doc.contains("alphas")) c.alphas = doc["alphas"].get<std::vector<double>>();
    if (doc.contains("sequence"))
      for (const auto& m : doc["sequence"])
        c.sequence.push_back({m.at("epsilon").get<double>(), m.at("vertex_scale").get<double>()});
    c.threads = doc.value("threads", c.threads);
    c.out_dir = doc.value("out", c.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

StudyConfig load_study_config(const std::string& path, StudyKind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  StudyConfig c = parse_study_config(doc, kind);
  // Relative paths inside a config resolve against its directory.
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&base](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
  };
  resolve(c.graph_file);
  resolve(c.source.path);
  return c;
}

std::function<double(double)> make_source(const SourceSpec& source) {
  if (source.type == "constant") return [c = source.value](double) { return c; };
  if (source.type == "cosine")
    return [m = source.mode](double t) { return std::cos(m * std::numbers::pi * t); };
  if (source.type == "file") {
    auto p = std::make_shared<Profile>(read_profile_csv(source.path));
    return [p](double t) { return (*p)(t); };
  }
  throw ConfigError("unknown source type '" + source.type + "'");
}

// ---------------------------------------------------------------------------
// Reports

bool StudyReport::trends_pass() const {
  return std::all_of(trends.begin(), trends.end(), [](const auto& kv) { return kv.second; });
}

std::size_t StudyReport::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("report has no column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

double StudyReport::number(std::size_t row, const std::string& name) const {
  const Cell& cell = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  throw std::invalid_argument("column " + name + " is not numeric");
}

std::string to_csv(const StudyReport& report) {
  std::ostringstream os;
  os << kCsvSchemaLine << '\n';
  for (std::size_t i = 0; i < report.columns.size(); ++i) os << (i ? "," : "") << report.columns[i];
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) os << format_double(v);
            else os << v;
          },
          row[i]);
    }
    os << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const StudyReport& report) {
  nlohmann::json j;
  j["schema"] = "strange-term-lab v1";
  j["study"] = report.study;
  j["trends"] = report.trends;
  j["passed"] = report.trends_pass();
  j["notes"] = report.notes;
  j["rows"] = nlohmann::json::array();
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    nlohmann::json row;
    for (std::size_t i = 0; i < report.columns.size(); ++i)
      std::visit([&](const auto& v) { row[report.columns[i]] = v; }, report.rows[r][i]);
    if (r < report.wall_seconds.size()) row["wall_seconds"] = report.wall_seconds[r];
    j["rows"].push_back(row);
  }
  return j;
}

void write_report(const StudyReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + p.string());
  };
  write(base / (report.study + ".csv"), to_csv(report));
  write(base / (report.study + ".json"), to_json(report).dump(2) + "\n");
  for (const auto& [name, text] : report.attachments) write(base / name, text);
}

// ---------------------------------------------------------------------------
// Studies

StudyReport run_capacity(const StudyConfig& config) {
  config.validate();
  StudyReport r;
  r.study = "capacity";
  r.columns = {"N", "delta", "r", "cell_energy", "mu_hat", "mu", "relation_error"};
  const double mu = strange_term(config.dimension);
  bool holds = true;
  for (double delta : config.deltas) {
    const auto t0 = Clock::now();
    const auto w = CorrectorProfile::with_radius_law(config.dimension, delta);
    const double mu_hat = strange_term_estimate(w);
    const double err = std::abs(mu_hat * (1.0 - delta * delta) - mu) / mu;
    holds = holds && err <= 1e-12;
    r.rows.push_back({static_cast<std::int64_t>(config.dimension), delta, w.hole_radius(), cell_energy(w), mu_hat, mu, err});
    r.wall_seconds.push_back(seconds_since(t0));
  }
  r.trends["relation_mu_hat_times_one_minus_delta_sq"] = holds;
  return r;
}

StudyReport run_rod_convergence(const StudyConfig& config) {
  config.validate();
  StudyReport r;
  r.study = "rod-convergence";
  r.columns = kRodColumns;
  for (const char* c : {"cg_iterations", "l2_error_rod", "l2_error_profile", "h1_error", "mean_profile",
                        "mean_target", "dist_mu_limit", "dist_mu0_limit", "apriori_ratio"})
    r.columns.push_back(c);
  const auto f = make_source(config.source);
  const double mu = config.effective_limit_mu();
  const double c_apriori = apriori_constant(config.z);
  for (double eps : config.ladder) {
    const auto t0 = Clock::now();
    const Rod rod = make_rod(config, eps);
    const Profile fp = Profile::sample(rod.axial_intervals, f);
    GridOperator op(rod.grid, config.z);
    const auto sol = with_eps_context(eps, [&] { return solve_poisson(op, apply_Ueps(fp, rod.grid), config.cg_tol); });
    const Profile limit = solve_limit_ode({mu, config.z, rod.axial_intervals}, fp);
    const Profile limit0 = solve_limit_ode({0.0, config.z, rod.axial_intervals}, fp);
    const Profile vu = apply_Veps(sol.solution);
    const double mu_hat = config.no_holes ? 0.0 : strange_term_estimate(CorrectorProfile::with_radius_law(config.dimension, rod.spec.delta()));
    const double norm_u = l2_norm(sol.solution);
    const double ratio = (dirichlet_energy(op, sol.solution) + norm_u * norm_u) / (c_apriori * fp.l2_norm() * fp.l2_norm());
    auto row = rod_cells(rod);
    for (Cell c : std::vector<Cell>{static_cast<std::int64_t>(sol.stats.iterations), l2_error(sol.solution, limit),
                                    l2_distance(vu, limit), h1_discrete_error(sol.solution, limit, eps), vu.integral(),
                                    fp.integral() / (config.z + mu_hat), l2_distance(vu, limit),
                                    l2_distance(vu, limit0), ratio})
      row.push_back(c);
    r.rows.push_back(std::move(row));
    r.wall_seconds.push_back(seconds_since(t0));
  }
  const auto err = column_values(r, "l2_error_profile");
  const auto dmu = column_values(r, "dist_mu_limit");
  const auto d0 = column_values(r, "dist_mu0_limit");
  const auto apr = column_values(r, "apriori_ratio");
  if (r.rows.size() > 1) r.trends["l2_error_profile_decreasing"] = strictly_decreasing(err);
  bool favors = true;
  for (std::size_t i = 0; i < dmu.size(); ++i) favors = favors && dmu[i] < d0[i];
  if (!config.no_holes && mu > 0.0) r.trends["discriminator_favors_mu_limit"] = favors;
  r.trends["apriori_bound"] = std::all_of(apr.begin(), apr.end(), [](double x) { return x <= 1.0; });
  return r;
}

StudyReport run_rod_spectrum(const StudyConfig& config) {
  config.validate();
  StudyReport r;
  r.study = "rod-spectrum";
  r.columns = kRodColumns;
  const std::size_t k = config.eigen_count;
  for (std::size_t j = 1; j <= k; ++j) r.columns.push_back("lambda_" + std::to_string(j));
  for (std::size_t j = 1; j <= k; ++j) r.columns.push_back("limit_lambda_" + std::to_string(j));
  for (std::size_t j = 1; j <= k; ++j) r.columns.push_back("reciprocal_gap_" + std::to_string(j));
  r.columns.push_back("outer_iterations");
  r.columns.push_back("inner_iterations");
  const double mu = config.effective_limit_mu();
  const auto limit = limit_eigenvalues(mu, k);
  bool control_ok = true;
  for (double eps : config.ladder) {
    const auto t0 = Clock::now();
    const Rod rod = make_rod(config, eps);
    GridOperator op(rod.grid, 1.0);
    EigenOptions opts;
    for (std::size_t j = 0; j < k; ++j)
      opts.initial.push_back(apply_Ueps(
          Profile::sample(rod.axial_intervals, [j](double t) { return std::cos(static_cast<double>(j) * std::numbers::pi * t); }),
          rod.grid));
    EigenSolveStats stats;
    const auto pairs = with_eps_context(eps, [&] { return smallest_eigenpairs(op, k, config.eigen_tol, opts, &stats); });
    auto row = rod_cells(rod);
    for (const auto& p : pairs) row.push_back(p.value);
    for (double l : limit) row.push_back(1.0 + l);
    for (std::size_t j = 0; j < k; ++j) row.push_back(std::abs(1.0 / pairs[j].value - 1.0 / (1.0 + limit[j])));
    row.push_back(static_cast<std::int64_t>(stats.outer_iterations));
    row.push_back(static_cast<std::int64_t>(stats.inner_iterations));
    if (config.no_holes)
      for (std::size_t j = 0; j < k; ++j)
        control_ok = control_ok && std::abs(pairs[j].value - (1.0 + limit[j])) <= 10.0 * rod.h * rod.h;
    r.rows.push_back(std::move(row));
    r.wall_seconds.push_back(seconds_since(t0));
  }
  if (r.rows.size() > 1)
    for (std::size_t j = 1; j <= k; ++j)
      r.trends["reciprocal_gap_" + std::to_string(j) + "_decreasing"] =
          strictly_decreasing(column_values(r, "reciprocal_gap_" + std::to_string(j)));
  if (config.no_holes) r.trends["control_within_10h2"] = control_ok;
  return r;
}

StudyReport run_resolvent_probe(const StudyConfig& config) {
  config.validate();
  StudyReport r;
  r.study = "resolvent-probe";
  r.columns = kRodColumns;
  for (const char* c : {"probe_max", "probe_argmax_mode", "cg_iterations_total", "apriori_ratio_max"})
    r.columns.push_back(c);
  const double mu = config.effective_limit_mu();
  const double c_apriori = apriori_constant(config.z);
  bool control_ok = true;
  for (double eps : config.ladder) {
    const auto t0 = Clock::now();
    const Rod rod = make_rod(config, eps);
    GridOperator op(rod.grid, config.z);
    double worst = 0.0, worst_ratio = 0.0;
    std::int64_t worst_mode = 0, iterations = 0;
    for (std::size_t j = 0; j < config.probe_modes; ++j) {
      const Profile g = Profile::sample(rod.axial_intervals,
                                        [j](double t) { return std::cos(static_cast<double>(j) * std::numbers::pi * t); });
      const auto sol = with_eps_context(eps, [&] { return solve_poisson(op, apply_Ueps(g, rod.grid), config.cg_tol); });
      const Profile v = resolvent_apply({mu, config.z, rod.axial_intervals}, g);
      const double d = l2_error(sol.solution, v) / g.l2_norm();
      iterations += sol.stats.iterations;
      const double norm_u = l2_norm(sol.solution);
      worst_ratio = std::max(worst_ratio, (dirichlet_energy(op, sol.solution) + norm_u * norm_u) /
                                              (c_apriori * g.l2_norm() * g.l2_norm()));
      if (d > worst) {
        worst = d;
        worst_mode = static_cast<std::int64_t>(j);
      }
    }
    if (config.no_holes) control_ok = control_ok && worst <= 10.0 * rod.h * rod.h;
    auto row = rod_cells(rod);
    row.push_back(worst);
    row.push_back(worst_mode);
    row.push_back(iterations);
    row.push_back(worst_ratio);
    r.rows.push_back(std::move(row));
    r.wall_seconds.push_back(seconds_since(t0));
  }
  if (r.rows.size() > 1) r.trends["probe_decreasing"] = strictly_decreasing(column_values(r, "probe_max"));
  const auto apr = column_values(r, "apriori_ratio_max");
  r.trends["apriori_bound"] = std::all_of(apr.begin(), apr.end(), [](double x) { return x <= 1.0; });
  if (config.no_holes) r.trends["control_within_10h2"] = control_ok;
  return r;
}

StudyReport run_graph_limit(const StudyConfig& config) {
  config.validate();
  const GraphDescription desc = load_graph_json(config.graph_file);
  const MetricGraph& graph = desc.graph;
  StudyReport r;
  r.study = "graph-limit";
  r.columns = {"regime", "condition", "beta", "mu", "u_min", "u_max"};
  const std::size_t k = std::max<std::size_t>(config.eigen_count, 1);
  for (std::size_t j = 1; j <= k; ++j) r.columns.push_back("lambda_" + std::to_string(j));
  const double mu = config.limit_mu ? *config.limit_mu : strange_term(config.dimension);
  const auto f = make_source(config.source);
  const EdgeSource source = [&graph, &f](std::size_t e, double s) { return f(s / graph.edge(e).length); };
  for (const auto& name : config.regimes) {
    ScalingRegime regime;
    if (name == "small-vertex") regime = ScalingRegime::SmallVertex;
    else if (name == "large-vertex") regime = ScalingRegime::LargeVertex;
    else if (name == "borderline") regime = ScalingRegime::Borderline;
    else throw ConfigError("unknown regime '" + name + "'");
    const auto t0 = Clock::now();
    const LimitProblem problem = limit_problem_for_regime(regime, graph, config.z, mu, config.vol_ratio);
    const GraphProfile u = solve_graph_poisson(graph, problem.condition, source, config.z, problem.mu, config.n_per_unit_length);
    const auto lambdas = graph_eigenvalues(graph, problem.condition, k, config.n_per_unit_length, problem.mu);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& edge : u.edge_values)
      for (double v : edge) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    const auto* robin = std::get_if<Robin>(&problem.condition);
    std::vector<Cell> row{std::string(to_string(regime)), std::string(condition_name(problem.condition)),
                          robin ? robin->beta.front() : 0.0, problem.mu, lo, hi};
    for (double l : lambdas) row.push_back(l);
    r.rows.push_back(std::move(row));
    r.wall_seconds.push_back(seconds_since(t0));
    std::ostringstream csv;
    write_csv(csv, graph, u);
    r.attachments.emplace_back("graph-limit-" + name + "-profile.csv", csv.str());
  }
  return r;
}

StudyReport run_regime(const StudyConfig& config) {
  config.validate();
  StudyReport r;
  r.study = "regime";
  r.columns = {"source", "alpha", "exponent", "regime"};
  const int n = config.dimension;
  for (double alpha : config.alphas) {
    const ScalingRegime regime = scaling_regime(n, alpha);
    r.rows.push_back({std::string("alpha"), alpha, (n - 1) - n * alpha, std::string(to_string(regime))});
  }
  if (config.sequence.size() >= 2) {
    const MetricGraph skeleton = MetricGraph::path({1.0});
    std::vector<FattenedGraphSpec> seq;
    for (const auto& m : config.sequence) seq.emplace_back(skeleton, m.epsilon, m.vertex_scale, 1.0, 1.0);
    const ScalingRegime regime = scaling_regime(n, seq);
    // Fitted alpha from the log-log slope of R against eps.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& m : config.sequence) {
      const double x = std::log(m.epsilon), y = std::log(m.vertex_scale);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double cnt = static_cast<double>(config.sequence.size());
    const double alpha = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    r.rows.push_back({std::string("sequence"), alpha, (n - 1) - n * alpha, std::string(to_string(regime))});
  }
  for (std::size_t i = 0; i < r.rows.size(); ++i) r.wall_seconds.push_back(0.0);
  return r;
}

StudyReport run_study(const StudyConfig& config) {
  switch (config.kind) {
    case StudyKind::Capacity: return run_capacity(config);
    case StudyKind::RodConvergence: return run_rod_convergence(config);
    case StudyKind::RodSpectrum: return run_rod_spectrum(config);
    case StudyKind::ResolventProbe: return run_resolvent_probe(config);
    case StudyKind::GraphLimit: return run_graph_limit(config);
    case StudyKind::Regime: return run_regime(config);
  }
  throw ConfigError("unknown study");
}

// ---------------------------------------------------------------------------
// CLI

int run_cli(int argc, char** argv) {
  CLI::App app{"Strange-term lab: perforated thin rods and their limit problems"};
  std::string study, config_path, out_dir;
  bool assert_trends = false;
  int threads = 0;
  std::vector<std::string> names;
  for (const auto& [k, name] : kStudyNames) names.emplace_back(name);
  app.add_option("study", study, "Study to run")->required()->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "JSON study configuration");
  app.add_option("--out", out_dir, "Output directory (default: config 'out' or .)");
  app.add_flag("--assert-trends", assert_trends, "Exit with code 4 when a trend flag fails");
  app.add_option("--threads", threads, "Worker threads (default: STL_THREADS or all cores)")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const StudyKind kind = parse_study_kind(study);
    StudyConfig config = config_path.empty() ? parse_study_config(nlohmann::json::object(), kind)
                                             : load_study_config(config_path, kind);
    if (!out_dir.empty()) config.out_dir = out_dir;
    int n = threads;
    if (n == 0) n = parallel::threads_from_env();
    if (n == 0) n = config.threads;
    if (n > 0) parallel::set_threads(n);

    const StudyReport report = run_study(config);
    write_report(report, config.out_dir);
    std::cout << to_csv(report);
    for (const auto& [name, ok] : report.trends) std::cout << "# trend " << name << ": " << (ok ? "pass" : "FAIL") << '\n';
    const bool relation_failed = kind == StudyKind::Capacity && !report.trends_pass();
    if (relation_failed || (assert_trends && !report.trends_pass())) return 4;
    return 0;
  } catch (const NonConvergence& e) {
    std::cerr << "stl: solver did not converge: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "stl: " << e.what() << '\n';
    return 2;
  } catch (const GraphParseError& e) {
    std::cerr << "stl: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "stl: invalid parameters: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "stl: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace stlab
