#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "stlab/geometry.hpp"
#include "stlab/metric_graph.hpp"

namespace stlab {

// Vertex conditions -----------------------------------------------------------

/// Continuity plus vanishing sum of edge derivatives.
struct Kirchhoff {};
/// Vertex values pinned to zero; edges decouple.
struct DirichletDecoupled {};
/// Continuity plus derivative sum = beta_v u(v) (weak form adds beta_v u(v) phi(v)).
struct Robin {
  std::vector<double> beta;
};
/// Eigenvalue-dependent condition: derivative sum = lambda q_v u(v); the
/// vertex carries mass q_v in the generalised pencil.
struct SpectralRobin {
  std::vector<double> mass;
};

using VertexCondition = std::variant<Kirchhoff, DirichletDecoupled, Robin, SpectralRobin>;

const char* condition_name(const VertexCondition& condition);
Robin uniform_robin(const MetricGraph& graph, double beta);
SpectralRobin uniform_spectral_robin(const MetricGraph& graph, double q);

/// Robin coefficient (z + mu) |V| / |Omega_0| of the borderline regime.
/// Throws std::invalid_argument unless z + mu >= 0 and vol_ratio > 0.
double robin_coefficient(double z, double mu, double vol_ratio);

// Solutions -----------------------------------------------------------------

/// Per-edge nodal values (index 0 at the tail, last at the head) and vertex values.
struct GraphProfile {
  std::vector<std::vector<double>> edge_values;
  std::vector<double> edge_spacing;
  std::vector<double> vertex_values;
};

/// Source on edge e at arc length s in [0, length_e] measured from the tail.
using EdgeSource = std::function<double(std::size_t edge, double s)>;

/// Intervals used on an edge: ceil(n_per_unit_length * length), at least 4.
std::size_t edge_intervals(double length, double n_per_unit_length);

/// Solves (-Laplace + z + mu) u = f on the graph under the vertex condition.
/// Throws std::invalid_argument for SpectralRobin (eigenproblem-only),
/// mismatched per-vertex data or z + mu <= 0.
GraphProfile solve_graph_poisson(const MetricGraph& graph, const VertexCondition& condition,
                                 const EdgeSource& f, double z, double mu, double n_per_unit_length);

/// k smallest eigenvalues of -Laplace + mu under the condition (generalised
/// pencil for SpectralRobin). Small systems are solved densely, larger ones
/// by block inverse iteration with sparse direct inner solves.
enum class GraphEigenSolver { Automatic, Dense, Iterative };

/// Size threshold (unknowns) above which the automatic choice iterates.
inline constexpr std::size_t kDenseGraphLimit = 1500;

std::vector<double> graph_eigenvalues(const MetricGraph& graph, const VertexCondition& condition,
                                      std::size_t k, double n_per_unit_length, double mu = 0.0,
                                      GraphEigenSolver solver = GraphEigenSolver::Automatic);

/// Sum over incident edges of the one-sided derivative pointing into each edge.
double vertex_flux_sum(const MetricGraph& graph, const GraphProfile& profile, std::size_t vertex);

// Regimes -------------------------------------------------------------------

struct LimitProblem {
  ScalingRegime regime;
  VertexCondition condition;
  double mu;            // operator is -Laplace + mu on every edge
  std::string summary;
};

/// SmallVertex -> Kirchhoff, LargeVertex -> DirichletDecoupled,
/// Borderline -> Robin with beta = (z + mu) vol_ratio at every vertex.
LimitProblem limit_problem_for_regime(ScalingRegime regime, const MetricGraph& graph, double z, double mu,
                                      double vol_ratio);

// I/O -------------------------------------------------------------------------

class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
  /// 1-based line of the error, 0 when not tied to a position.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct GraphDescription {
  MetricGraph graph;
  std::optional<VertexCondition> condition;
};

/// Parses {"vertices": [...], "edges": [{"tail", "head", "length"}...],
/// "condition": {"type", "params"}}.
GraphDescription parse_graph_json(const std::string& text);
GraphDescription load_graph_json(const std::string& path);

/// CSV "edge_id,t,value".
void write_csv(std::ostream& os, const MetricGraph& graph, const GraphProfile& profile);

}  // namespace stlab
