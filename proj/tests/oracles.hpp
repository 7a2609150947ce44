#pragma once

// Test-only reference computations. Nothing here calls the code it checks
// beyond the single-step update it is meant to iterate.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "majdyn/dynamics.hpp"
#include "majdyn/graph.hpp"
#include "majdyn/graphgen.hpp"
#include "majdyn/rng.hpp"

namespace majdyn::testing {

/// The i-th of the 2^n ±1 states: bit v set means +1.
inline SpinState state_from_bits(std::size_t n, std::uint64_t bits) {
  std::vector<Spin> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (bits >> i) & 1 ? 1 : -1;
  return SpinState(std::move(v));
}

/// Direct Eq.-style majority step written against raw adjacency, independent
/// of the library's stepper.
inline std::vector<int> naive_md_step(const Graph& g, const std::vector<int>& x) {
  std::vector<int> y(x.size());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    int sum = 0;
    for (Vertex w = 0; w < g.num_vertices(); ++w)
      if (g.has_edge(v, w)) sum += x[w];
    y[v] = sum > 0 ? 1 : sum < 0 ? -1 : x[v];
  }
  return y;
}

struct OrbitFacts {
  std::size_t tail = 0;    // first index that lies on the cycle
  std::size_t period = 0;  // cycle length
};

/// Iterates naive_md_step, remembering every visited state, until a repeat.
inline OrbitFacts brute_force_orbit(const Graph& g, std::vector<int> x) {
  std::map<std::vector<int>, std::size_t> seen;
  for (std::size_t t = 0;; ++t) {
    auto [it, fresh] = seen.try_emplace(x, t);
    if (!fresh) return {it->second, t - it->second};
    x = naive_md_step(g, x);
  }
}

/// Largest subset of `part` with every member having 2*inside >= d, by
/// exhaustive search over all subsets. Exponential; keep |part| <= 12.
inline std::vector<Vertex> brute_force_core(const Graph& g, const std::vector<Vertex>& part, std::size_t d) {
  std::vector<Vertex> best;
  const std::size_t k = part.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<Vertex> subset;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1) subset.push_back(part[i]);
    bool ok = true;
    for (Vertex v : subset) {
      std::size_t inside = 0;
      for (Vertex w : subset) inside += g.has_edge(v, w);
      if (2 * inside < d) {
        ok = false;
        break;
      }
    }
    if (ok && subset.size() > best.size()) best = subset;
  }
  std::sort(best.begin(), best.end());
  return best;
}

/// Small random graph with independent edges; not necessarily connected.
inline Graph random_small_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  const BernoulliThreshold keep(p);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (keep(rng)) edges.push_back({u, v});
  return Graph::from_edges(n, edges);
}

}  // namespace majdyn::testing
