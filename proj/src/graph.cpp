#include "majdyn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace majdyn {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n > std::size_t{UINT32_MAX}) throw GraphError("vertex count exceeds 32-bit index range");

  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") has an endpoint >= n = " + std::to_string(n));
    }
    if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
    canon.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  std::sort(canon.begin(), canon.end());
  if (auto dup = std::adjacent_find(canon.begin(), canon.end()); dup != canon.end()) {
    throw GraphError("duplicate edge (" + std::to_string(dup->u) + ", " + std::to_string(dup->v) + ")");
  }

  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const auto& e : canon) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];

  g.neighbors_.resize(2 * canon.size());
  g.edge_ids_.resize(2 * canon.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling in edge order leaves every
  // neighbor list sorted: smaller neighbors (as v of an earlier u) arrive
  // before larger ones (as v of this u).
  for (EdgeId id = 0; id < canon.size(); ++id) {
    const auto [u, v] = canon[id];
    g.neighbors_[cursor[u]] = v;
    g.edge_ids_[cursor[u]++] = id;
    g.neighbors_[cursor[v]] = u;
    g.edge_ids_[cursor[v]++] = id;
  }
  g.edges_ = std::move(canon);
  return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const noexcept {
  if (u >= num_vertices() || v >= num_vertices()) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<std::size_t> Graph::regular_degree() const noexcept {
  const std::size_t n = num_vertices();
  if (n == 0) return std::nullopt;
  const std::size_t d = degree(0);
  for (Vertex v = 1; v < n; ++v) {
    if (degree(v) != d) return std::nullopt;
  }
  return d;
}

void write_edge_list(const Graph& graph, std::ostream& out) {
  out << graph.num_vertices() << ' ' << graph.num_edges() << '\n';
  for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot open " + path.string() + " for writing");
  write_edge_list(graph, out);
  if (!out) throw GraphError("write to " + path.string() + " failed");
}

namespace {

// Parses exactly two unsigned decimal fields separated by one space.
bool parse_pair(std::string_view line, std::uint64_t& a, std::uint64_t& b) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const char* first = line.data();
  const char* last = line.data() + line.size();
  auto r1 = std::from_chars(first, last, a);
  if (r1.ec != std::errc{} || r1.ptr == last || *r1.ptr != ' ') return false;
  auto r2 = std::from_chars(r1.ptr + 1, last, b);
  return r2.ec == std::errc{} && r2.ptr == last;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw GraphError("missing header line");
  std::uint64_t n = 0, m = 0;
  if (!parse_pair(line, n, m)) throw GraphError("malformed header: '" + line + "'");

  std::vector<Edge> edges;
  edges.reserve(m);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::uint64_t u = 0, v = 0;
    if (!parse_pair(line, u, v)) {
      throw GraphError("malformed edge on line " + std::to_string(line_no) + ": '" + line + "'");
    }
    if (u >= n || v >= n) {
      throw GraphError("vertex index out of range on line " + std::to_string(line_no));
    }
    if (u == v) throw GraphError("self-loop on line " + std::to_string(line_no));
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  if (edges.size() != m) {
    throw GraphError("header declares " + std::to_string(m) + " edges but file has " +
                     std::to_string(edges.size()));
  }
  return Graph::from_edges(n, edges);
}

Graph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open " + path.string());
  return read_edge_list(in);
}

}  // namespace majdyn
