#include "stlab/quantumgraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <json.hpp>

#include "stlab/block_eigensolver.hpp"

namespace stlab {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Unknown layout: vertex values first (absent when pinned), then the interior
// nodes of each edge in edge order.
struct GraphMesh {
  std::vector<std::size_t> intervals;
  std::vector<double> spacing;
  std::vector<std::size_t> interior_offset;
  bool vertex_unknowns = true;
  std::size_t size = 0;

  // -1 when the node is a pinned vertex.
  long index(const MetricGraph& g, std::size_t e, std::size_t i) const {
    const auto& edge = g.edge(e);
    if (i == 0 || i == intervals[e]) {
      if (!vertex_unknowns) return -1;
      return static_cast<long>(i == 0 ? edge.tail : edge.head);
    }
    return static_cast<long>(interior_offset[e] + i - 1);
  }
};

GraphMesh make_mesh(const MetricGraph& g, double n_per_unit_length, bool vertex_unknowns) {
  if (!(n_per_unit_length > 0.0)) throw std::invalid_argument("graph mesh: n_per_unit_length must be positive");
  GraphMesh mesh;
  mesh.vertex_unknowns = vertex_unknowns;
  std::size_t next = vertex_unknowns ? g.vertex_count() : 0;
  for (const auto& edge : g.edges()) {
    const std::size_t m = edge_intervals(edge.length, n_per_unit_length);
    mesh.intervals.push_back(m);
    mesh.spacing.push_back(edge.length / static_cast<double>(m));
    mesh.interior_offset.push_back(next);
    next += m - 1;
  }
  mesh.size = next;
  return mesh;
}

// Stiffness (1/h per segment) and lumped mass (h/2 to each segment end).
void assemble(const MetricGraph& g, const GraphMesh& mesh, SparseMatrix& stiffness, Eigen::VectorXd& mass) {
  std::vector<Eigen::Triplet<double>> triplets;
  mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.size));
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const double h = mesh.spacing[e];
    for (std::size_t i = 0; i < mesh.intervals[e]; ++i) {
      const long a = mesh.index(g, e, i);
      const long b = mesh.index(g, e, i + 1);
      if (a >= 0) {
        triplets.emplace_back(a, a, 1.0 / h);
        mass[a] += 0.5 * h;
      }
      if (b >= 0) {
        triplets.emplace_back(b, b, 1.0 / h);
        mass[b] += 0.5 * h;
      }
      if (a >= 0 && b >= 0) {
        triplets.emplace_back(a, b, -1.0 / h);
        triplets.emplace_back(b, a, -1.0 / h);
      }
    }
  }
  stiffness.resize(static_cast<Eigen::Index>(mesh.size), static_cast<Eigen::Index>(mesh.size));
  stiffness.setFromTriplets(triplets.begin(), triplets.end());
}

void check_vertex_data(const MetricGraph& g, const std::vector<double>& data, const char* what) {
  if (data.size() != g.vertex_count())
    throw std::invalid_argument(std::string(what) + ": expected one value per vertex");
  for (double x : data)
    if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument(std::string(what) + ": values must be finite and >= 0");
}

void add_vertex_diagonal(SparseMatrix& m, const std::vector<double>& values) {
  for (std::size_t v = 0; v < values.size(); ++v) m.coeffRef(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)) += values[v];
}

GraphProfile unpack(const MetricGraph& g, const GraphMesh& mesh, const Eigen::VectorXd& x) {
  GraphProfile p;
  p.vertex_values.assign(g.vertex_count(), 0.0);
  if (mesh.vertex_unknowns)
    for (std::size_t v = 0; v < g.vertex_count(); ++v) p.vertex_values[v] = x[static_cast<Eigen::Index>(v)];
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    std::vector<double> vals(mesh.intervals[e] + 1, 0.0);
    for (std::size_t i = 0; i <= mesh.intervals[e]; ++i) {
      const long k = mesh.index(g, e, i);
      if (k >= 0) vals[i] = x[k];
    }
    p.edge_values.push_back(std::move(vals));
    p.edge_spacing.push_back(mesh.spacing[e]);
  }
  return p;
}

}  // namespace

const char* condition_name(const VertexCondition& condition) {
  switch (condition.index()) {
    case 0: return "kirchhoff";
    case 1: return "dirichlet";
    case 2: return "robin";
    default: return "spectral_robin";
  }
}

Robin uniform_robin(const MetricGraph& graph, double beta) { return Robin{std::vector<double>(graph.vertex_count(), beta)}; }

SpectralRobin uniform_spectral_robin(const MetricGraph& graph, double q) {
  return SpectralRobin{std::vector<double>(graph.vertex_count(), q)};
}

double robin_coefficient(double z, double mu, double vol_ratio) {
  if (!(z + mu >= 0.0) || !(vol_ratio > 0.0) || !std::isfinite(vol_ratio))
    throw std::invalid_argument("robin_coefficient: need z + mu >= 0 and a positive volume ratio");
  return (z + mu) * vol_ratio;
}

std::size_t edge_intervals(double length, double n_per_unit_length) {
  const double m = std::ceil(length * n_per_unit_length * (1.0 - 1e-12));
  return std::max<std::size_t>(4, static_cast<std::size_t>(m));
}

GraphProfile solve_graph_poisson(const MetricGraph& graph, const VertexCondition& condition, const EdgeSource& f,
                                 double z, double mu, double n_per_unit_length) {
  if (std::holds_alternative<SpectralRobin>(condition))
    throw std::invalid_argument("solve_graph_poisson: spectral Robin conditions only define an eigenproblem");
  if (!(z + mu > 0.0)) throw std::invalid_argument("solve_graph_poisson: z + mu must be positive");
  if (const auto* robin = std::get_if<Robin>(&condition)) check_vertex_data(graph, robin->beta, "robin beta");

  const bool pinned = std::holds_alternative<DirichletDecoupled>(condition);
  const GraphMesh mesh = make_mesh(graph, n_per_unit_length, !pinned);
  SparseMatrix a;
  Eigen::VectorXd mass;
  assemble(graph, mesh, a, mass);
  if (const auto* robin = std::get_if<Robin>(&condition)) add_vertex_diagonal(a, robin->beta);
  for (Eigen::Index i = 0; i < a.rows(); ++i) a.coeffRef(i, i) += (z + mu) * mass[i];

  // Nodal source; vertex values are taken from the first incident edge.
  Eigen::VectorXd fn = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.size));
  std::vector<bool> seen(mesh.size, false);
  for (std::size_t e = 0; e < graph.edge_count(); ++e)
    for (std::size_t i = 0; i <= mesh.intervals[e]; ++i) {
      const long k = mesh.index(graph, e, i);
      if (k < 0 || seen[k]) continue;
      fn[k] = f(e, static_cast<double>(i) * mesh.spacing[e]);
      seen[k] = true;
    }
  const Eigen::VectorXd b = mass.cwiseProduct(fn);

  Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("solve_graph_poisson: factorisation failed");
  Eigen::VectorXd x = ldlt.solve(b);
  for (int pass = 0; pass < 2; ++pass) x += ldlt.solve(b - a * x);  // iterative refinement
  return unpack(graph, mesh, x);
}

std::vector<double> graph_eigenvalues(const MetricGraph& graph, const VertexCondition& condition, std::size_t k,
                                      double n_per_unit_length, double mu, GraphEigenSolver solver) {
  if (k == 0) return {};
  if (!(mu >= 0.0)) throw std::invalid_argument("graph_eigenvalues: mu must be >= 0");
  const bool pinned = std::holds_alternative<DirichletDecoupled>(condition);
  const GraphMesh mesh = make_mesh(graph, n_per_unit_length, !pinned);
  SparseMatrix a;
  Eigen::VectorXd mass;
  assemble(graph, mesh, a, mass);
  if (const auto* robin = std::get_if<Robin>(&condition)) {
    check_vertex_data(graph, robin->beta, "robin beta");
    add_vertex_diagonal(a, robin->beta);
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) a.coeffRef(i, i) += mu * mass[i];
  if (const auto* spectral = std::get_if<SpectralRobin>(&condition)) {
    check_vertex_data(graph, spectral->mass, "spectral robin mass");
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) mass[static_cast<Eigen::Index>(v)] += spectral->mass[v];
  }
  if (k > mesh.size) throw std::invalid_argument("graph_eigenvalues: more eigenvalues requested than unknowns");

  const bool dense_path = solver == GraphEigenSolver::Dense ||
                          (solver == GraphEigenSolver::Automatic && mesh.size <= kDenseGraphLimit);
  if (dense_path) {
    const Eigen::MatrixXd dense(a);
    const Eigen::MatrixXd m = mass.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("graph_eigenvalues: dense eigensolver failed");
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + k);
    return out;
  }

  constexpr double kShift = 1.0;
  SparseMatrix shifted = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) shifted.coeffRef(i, i) += kShift * mass[i];
  auto ldlt = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>(shifted);
  if (ldlt->info() != Eigen::Success) throw std::runtime_error("graph_eigenvalues: factorisation failed");

  PencilOperators ops;
  ops.size = mesh.size;
  ops.shift = kShift;
  ops.mass.assign(mass.data(), mass.data() + mass.size());
  ops.apply_stiffness = [&a](std::span<const double> x, std::span<double> y) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    yv = a * xv;
  };
  ops.solve_shifted = [ldlt](std::span<const double> rhs, std::span<double> x, double) {
    Eigen::Map<const Eigen::VectorXd> r(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    Eigen::Map<Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    xv = ldlt->solve(r);
    return 0;
  };
  const auto pairs = block_inverse_iteration(ops, k, 1e-8, {});
  if (!pairs.converged) throw std::runtime_error("graph_eigenvalues: block iteration did not converge");
  return pairs.values;
}

double vertex_flux_sum(const MetricGraph& graph, const GraphProfile& profile, std::size_t vertex) {
  double sum = 0.0;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const auto& edge = graph.edge(e);
    const auto& u = profile.edge_values.at(e);
    const double h = profile.edge_spacing.at(e);
    const std::size_t m = u.size() - 1;
    if (edge.tail == vertex) sum += (u[1] - u[0]) / h;
    if (edge.head == vertex) sum += (u[m - 1] - u[m]) / h;
  }
  return sum;
}

LimitProblem limit_problem_for_regime(ScalingRegime regime, const MetricGraph& graph, double z, double mu,
                                      double vol_ratio) {
  switch (regime) {
    case ScalingRegime::SmallVertex:
      return {regime, Kirchhoff{}, mu, "vertices vanish: continuity and Kirchhoff balance"};
    case ScalingRegime::LargeVertex:
      return {regime, DirichletDecoupled{}, mu, "vertices dominate: edges decouple with zero vertex values"};
    case ScalingRegime::Borderline:
      return {regime, uniform_robin(graph, robin_coefficient(z, mu, vol_ratio)), mu,
              "vertex volume comparable to edges: Robin balance"};
  }
  throw std::invalid_argument("limit_problem_for_regime: unknown regime");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

std::vector<double> per_vertex(const nlohmann::json& value, std::size_t n, const char* key) {
  if (value.is_number()) return std::vector<double>(n, value.get<double>());
  if (value.is_array()) {
    auto out = value.get<std::vector<double>>();
    if (out.size() != n) throw GraphParseError(std::string("condition.params.") + key + ": expected one value per vertex", 0);
    return out;
  }
  throw GraphParseError(std::string("condition.params.") + key + ": expected a number or an array", 0);
}

VertexCondition parse_condition(const nlohmann::json& c, std::size_t vertices) {
  const std::string type = c.at("type").get<std::string>();
  const nlohmann::json params = c.value("params", nlohmann::json::object());
  if (type == "kirchhoff") return Kirchhoff{};
  if (type == "dirichlet") return DirichletDecoupled{};
  if (type == "robin") return Robin{per_vertex(params.at("beta"), vertices, "beta")};
  if (type == "spectral_robin") return SpectralRobin{per_vertex(params.at("q"), vertices, "q")};
  throw GraphParseError("condition.type: unknown condition '" + type + "'", 0);
}

}  // namespace

GraphDescription parse_graph_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw GraphParseError("graph JSON, line " + std::to_string(line) + ": " + e.what(), line);
  }
  try {
    std::vector<std::string> ids;
    for (const auto& v : doc.at("vertices")) ids.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    auto find = [&ids](const nlohmann::json& ref) -> std::size_t {
      const std::string key = ref.is_string() ? ref.get<std::string>() : ref.dump();
      const auto it = std::find(ids.begin(), ids.end(), key);
      if (it == ids.end()) throw GraphParseError("edges: unknown vertex '" + key + "'", 0);
      return static_cast<std::size_t>(it - ids.begin());
    };
    std::vector<GraphEdge> edges;
    for (const auto& e : doc.at("edges"))
      edges.push_back({find(e.at("tail")), find(e.at("head")), e.at("length").get<double>()});
    GraphDescription out{MetricGraph(std::move(ids), std::move(edges)), std::nullopt};
    if (doc.contains("condition")) out.condition = parse_condition(doc.at("condition"), out.graph.vertex_count());
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw GraphParseError(std::string("graph JSON: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw GraphParseError(std::string("graph JSON: ") + e.what(), 0);
  }
}

GraphDescription load_graph_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphParseError("cannot open graph file " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph_json(ss.str());
}

void write_csv(std::ostream& os, const MetricGraph& graph, const GraphProfile& profile) {
  os << "edge_id,t,value\n";
  os.precision(17);
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const auto& u = profile.edge_values.at(e);
    for (std::size_t i = 0; i < u.size(); ++i)
      os << e << ',' << static_cast<double>(i) * profile.edge_spacing[e] << ',' << u[i] << '\n';
  }
}

}  // namespace stlab
