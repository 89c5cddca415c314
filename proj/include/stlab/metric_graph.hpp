#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace stlab {

struct GraphEdge {
  std::size_t tail = 0;
  std::size_t head = 0;
  double length = 1.0;
};

/// Finite connected metric graph. Vertices are addressed by index; the
/// original identifiers are kept for I/O.
class MetricGraph {
 public:
  /// Throws std::invalid_argument on an empty vertex set, an edgeless graph,
  /// out-of-range endpoints, non-positive lengths or a disconnected graph.
  MetricGraph(std::vector<std::string> vertex_ids, std::vector<GraphEdge> edges);

  /// Path graph 0 - 1 - ... with the given edge lengths.
  static MetricGraph path(const std::vector<double>& lengths);
  /// Star with one centre (index 0) and one leaf per edge length.
  static MetricGraph star(const std::vector<double>& lengths);

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphEdge& edge(std::size_t e) const { return edges_.at(e); }
  const std::string& vertex_id(std::size_t v) const { return ids_.at(v); }
  std::size_t degree(std::size_t v) const;
  double total_length() const;

 private:
  std::vector<std::string> ids_;
  std::vector<GraphEdge> edges_;
};

}  // namespace stlab
