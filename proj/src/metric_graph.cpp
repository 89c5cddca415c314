#include "stlab/metric_graph.hpp"

#include <numeric>
#include <stdexcept>

namespace stlab {

MetricGraph::MetricGraph(std::vector<std::string> vertex_ids, std::vector<GraphEdge> edges)
    : ids_(std::move(vertex_ids)), edges_(std::move(edges)) {
  if (ids_.empty()) throw std::invalid_argument("metric graph needs at least one vertex");
  if (edges_.empty()) throw std::invalid_argument("metric graph needs at least one edge");
  for (const auto& e : edges_) {
    if (e.tail >= ids_.size() || e.head >= ids_.size())
      throw std::invalid_argument("edge endpoint out of range");
    if (!(e.length > 0.0)) throw std::invalid_argument("edge lengths must be positive");
  }
  // union-find connectivity check
  std::vector<std::size_t> parent(ids_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : edges_) parent[find(e.tail)] = find(e.head);
  const auto root = find(0);
  for (std::size_t v = 1; v < ids_.size(); ++v)
    if (find(v) != root) throw std::invalid_argument("metric graph is disconnected");
}

MetricGraph MetricGraph::path(const std::vector<double>& lengths) {
  std::vector<std::string> ids;
  std::vector<GraphEdge> edges;
  for (std::size_t v = 0; v <= lengths.size(); ++v) ids.push_back(std::to_string(v));
  for (std::size_t e = 0; e < lengths.size(); ++e) edges.push_back({e, e + 1, lengths[e]});
  return MetricGraph(std::move(ids), std::move(edges));
}

MetricGraph MetricGraph::star(const std::vector<double>& lengths) {
  std::vector<std::string> ids{"0"};
  std::vector<GraphEdge> edges;
  for (std::size_t e = 0; e < lengths.size(); ++e) {
    ids.push_back(std::to_string(e + 1));
    edges.push_back({0, e + 1, lengths[e]});
  }
  return MetricGraph(std::move(ids), std::move(edges));
}

std::size_t MetricGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (const auto& e : edges_) d += (e.tail == v) + (e.head == v);
  return d;
}

double MetricGraph::total_length() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.length;
  return total;
}

}  // namespace stlab
