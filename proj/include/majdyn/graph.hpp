#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace majdyn {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Raised for structurally invalid graphs and malformed edge-list files.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Vertices are 0-based. Neighbor lists are sorted ascending. Edges are
/// numbered 0..m-1 in lexicographic order of (u, v) with u < v, and every
/// adjacency slot carries the id of the edge it represents.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an edge list. Endpoint order within an edge is
  /// irrelevant. Throws GraphError on self-loops, duplicate edges, or
  /// endpoints >= n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }
  /// Edge ids aligned with neighbors(v).
  std::span<const EdgeId> incident_edges(Vertex v) const noexcept {
    return {edge_ids_.data() + offsets_[v], degree(v)};
  }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const Vertex> adjacency() const noexcept { return neighbors_; }

  bool has_edge(Vertex u, Vertex v) const noexcept;

  /// Common degree when every vertex has the same degree.
  std::optional<std::size_t> regular_degree() const noexcept;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
  }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> neighbors_;
  std::vector<EdgeId> edge_ids_;
  std::vector<Edge> edges_;
};

/// Writes "n m" followed by one "u v" line per edge (u < v), LF endings.
void write_edge_list(const Graph& graph, std::ostream& out);
void write_edge_list(const Graph& graph, const std::filesystem::path& path);

Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& path);

}  // namespace majdyn
