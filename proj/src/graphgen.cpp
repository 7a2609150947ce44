#include "majdyn/graphgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "majdyn/rng.hpp"

namespace majdyn {

BernoulliThreshold::BernoulliThreshold(double p) {
  if (!(p > 0.0)) return;
  if (p >= 1.0) {
    always_ = true;
    return;
  }
  threshold_ = static_cast<std::uint64_t>(std::ldexp(p, 64));
}

namespace {

// Restarting configuration model. Exactly uniform over simple graphs.
Graph pairing_with_restart(std::size_t n, std::size_t d, Rng& rng) {
  const std::size_t num_stubs = n * d;
  // Stub s belongs to vertex s / d. The pool is only ever permuted, never
  // refilled: any arrangement is a valid starting point for a uniform
  // matching, so a restart just resets the live range.
  std::vector<std::uint32_t> pool(num_stubs);
  std::iota(pool.begin(), pool.end(), std::uint32_t{0});

  // Partial adjacency of the current attempt, d slots per vertex.
  std::vector<Vertex> partial(num_stubs);
  std::vector<std::uint32_t> filled(n, 0);
  std::vector<Edge> edges;
  edges.reserve(num_stubs / 2);

  for (;;) {
    std::size_t live = num_stubs;
    bool simple = true;
    while (live > 0) {
      const Vertex u = pool[--live] / d;
      const std::size_t pick = rng.below(live);
      std::swap(pool[pick], pool[live - 1]);
      const Vertex v = pool[--live] / d;

      const Vertex* row = partial.data() + std::size_t{u} * d;
      if (u == v || std::find(row, row + filled[u], v) != row + filled[u]) {
        simple = false;
        break;
      }
      partial[std::size_t{u} * d + filled[u]++] = v;
      partial[std::size_t{v} * d + filled[v]++] = u;
      edges.push_back({u, v});
    }
    if (simple) return Graph::from_edges(n, edges);
    for (const auto& e : edges) {
      filled[e.u] = 0;
      filled[e.v] = 0;
    }
    edges.clear();
  }
}

// Steger-Wormald sequential pairing: repeatedly draw two live stubs
// uniformly, keep the pair only if it adds a new non-loop edge, and restart
// when no admissible pair is left. Asymptotically uniform for fixed d.
Graph sequential_pairing(std::size_t n, std::size_t d, Rng& rng) {
  const std::size_t num_stubs = n * d;
  std::vector<std::uint32_t> pool(num_stubs);
  std::vector<Vertex> partial(num_stubs);
  std::vector<std::uint32_t> filled(n, 0);
  std::vector<Edge> edges;
  edges.reserve(num_stubs / 2);

  auto adjacent = [&](Vertex u, Vertex v) {
    const Vertex* row = partial.data() + std::size_t{u} * d;
    return std::find(row, row + filled[u], v) != row + filled[u];
  };

  // A live vertex has fewer than d partners so far; with more than d other
  // live vertices one of them is necessarily admissible.
  auto admissible_pair_exists = [&](std::size_t live) {
    std::vector<Vertex> verts;
    for (std::size_t i = 0; i < live; ++i) verts.push_back(pool[i] / d);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    if (verts.size() > d + 1) return true;
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        if (!adjacent(verts[i], verts[j])) return true;
    return false;
  };

  for (;;) {
    std::iota(pool.begin(), pool.end(), std::uint32_t{0});
    std::fill(filled.begin(), filled.end(), 0);
    edges.clear();
    std::size_t live = num_stubs;
    bool stuck = false;
    while (live > 0) {
      std::size_t a = 0, b = 0;
      for (std::size_t rejected = 0;; ++rejected) {
        a = rng.below(live);
        b = rng.below(live - 1);
        if (b >= a) ++b;
        const Vertex u = pool[a] / d, v = pool[b] / d;
        if (u != v && !adjacent(u, v)) break;
        if (rejected >= 64 && !admissible_pair_exists(live)) {
          stuck = true;
          break;
        }
      }
      if (stuck) break;
      const Vertex u = pool[a] / d, v = pool[b] / d;
      partial[std::size_t{u} * d + filled[u]++] = v;
      partial[std::size_t{v} * d + filled[v]++] = u;
      edges.push_back({std::min(u, v), std::max(u, v)});
      if (a < b) std::swap(a, b);
      std::swap(pool[a], pool[--live]);
      std::swap(pool[b], pool[--live]);
    }
    if (!stuck) return Graph::from_edges(n, edges);
  }
}

}  // namespace

Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed, RegularSampler sampler) {
  if (n == 0) throw std::invalid_argument("random regular graph needs n >= 1");
  if (d >= n) throw std::invalid_argument("random regular graph needs d < n");
  if ((n * d) % 2 != 0) throw std::invalid_argument("no d-regular graph exists when n*d is odd");
  if (d == 0) return Graph::from_edges(n, {});

  if (sampler == RegularSampler::kAuto) {
    sampler = d <= kMaxRestartDegree ? RegularSampler::kPairingWithRestart : RegularSampler::kSequentialPairing;
  }
  Rng rng(seed);
  return sampler == RegularSampler::kPairingWithRestart ? pairing_with_restart(n, d, rng)
                                                         : sequential_pairing(n, d, rng);
}

Graph gen_erdos_renyi(std::size_t n, double d, std::uint64_t seed) {
  if (!(d >= 0.0) || d > static_cast<double>(n)) {
    throw std::invalid_argument("Erdos-Renyi average degree must satisfy 0 <= d <= n");
  }
  if (n == 0) return Graph::from_edges(0, {});
  const BernoulliThreshold keep(d / static_cast<double>(n));
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(d * static_cast<double>(n) / 2.0 * 1.1) + 16);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (keep(rng)) edges.push_back({u, v});
    }
  }
  return Graph::from_edges(n, edges);
}

Graph complete_graph(std::size_t k) {
  if (k < 1) throw std::invalid_argument("complete graph needs k >= 1");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < k; ++u)
    for (Vertex v = u + 1; v < k; ++v) edges.push_back({u, v});
  return Graph::from_edges(k, edges);
}

Graph complete_bipartite_3_3() {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < 3; ++u)
    for (Vertex v = 3; v < 6; ++v) edges.push_back({u, v});
  return Graph::from_edges(6, edges);
}

Graph cycle_graph(std::size_t k) {
  if (k < 3) throw std::invalid_argument("simple cycle needs k >= 3");
  std::vector<Edge> edges;
  for (Vertex i = 0; i < k; ++i) edges.push_back({i, static_cast<Vertex>((i + 1) % k)});
  return Graph::from_edges(k, edges);
}

Graph path_graph(std::size_t k) {
  if (k < 1) throw std::invalid_argument("path needs k >= 1");
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < k; ++i) edges.push_back({i, i + 1});
  return Graph::from_edges(k, edges);
}

namespace {

std::size_t parse_parameter(std::string_view name, std::string_view prefix) {
  std::string_view arg = name.substr(prefix.size());
  if (arg.size() < 3 || arg.front() != '(' || arg.back() != ')') {
    throw std::invalid_argument("expected " + std::string(prefix) + "(k), got '" + std::string(name) + "'");
  }
  arg = arg.substr(1, arg.size() - 2);
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), k);
  if (ec != std::errc{} || ptr != arg.data() + arg.size()) {
    throw std::invalid_argument("bad parameter in '" + std::string(name) + "'");
  }
  return k;
}

}  // namespace

Graph named_graph(std::string_view name) {
  if (name == "K4") return complete_graph(4);
  if (name == "K33") return complete_bipartite_3_3();
  if (name.starts_with("cycle")) return cycle_graph(parse_parameter(name, "cycle"));
  if (name.starts_with("complete")) return complete_graph(parse_parameter(name, "complete"));
  if (name.starts_with("path")) return path_graph(parse_parameter(name, "path"));
  throw std::invalid_argument("unknown graph name '" + std::string(name) + "'");
}

}  // namespace majdyn
