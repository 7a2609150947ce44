#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "majdyn/dynamics.hpp"
#include "majdyn/graph.hpp"
#include "majdyn/rng.hpp"

namespace majdyn {

/// Result of peeling a vertex set down to its core.
struct CoreResult {
  std::vector<Vertex> core_vertices;  // sorted ascending
  std::vector<Vertex> peel_order;     // removed vertices, in removal order

  bool empty() const noexcept { return core_vertices.empty(); }
};

/// Largest subset of `part` in which every member has at least d/2 of its
/// neighbors inside the subset (d the common degree; compared as 2*inside >= d).
/// Vertices are removed first-in first-out from a queue of violators.
///
/// Throws std::invalid_argument if the graph is not regular, or if `part`
/// contains an out-of-range or repeated vertex.
CoreResult peel_to_core(const Graph& graph, std::span<const Vertex> part);

/// Same fixed point, but each removal picks a uniformly random current
/// violator. Exists to exercise order independence.
CoreResult peel_to_core_randomized(const Graph& graph, std::span<const Vertex> part, Rng& rng);

/// Whether the positive part of a ±1 state contains a core.
bool has_positive_core(const Graph& graph, const SpinState& state);

/// Both parts nonempty and no vertex unsatisfied.
bool is_internal_cut(const Graph& graph, const SpinState& state);

/// Runs exactly k MD0 steps from `initial`, sends every neutral vertex to the
/// negative part, and checks for a positive core.
bool md0_core_probe(const Graph& graph, const SpinState& initial, std::size_t k);

/// Maps 0 to -1, leaves ±1 alone.
SpinState neutral_to_negative(const SpinState& state);

}  // namespace majdyn
