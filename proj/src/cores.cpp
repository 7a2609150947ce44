#include "majdyn/cores.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace majdyn {

namespace {

struct PeelState {
  std::size_t degree = 0;
  std::vector<char> member;
  std::vector<std::uint32_t> inside;
  std::vector<Vertex> members;

  bool violates(Vertex v) const noexcept { return 2 * std::size_t{inside[v]} < degree; }
};

PeelState start_peel(const Graph& graph, std::span<const Vertex> part) {
  const auto d = graph.regular_degree();
  if (!d) throw std::invalid_argument("core peeling requires a regular graph");
  PeelState s;
  s.degree = *d;
  s.member.assign(graph.num_vertices(), 0);
  for (Vertex v : part) {
    if (v >= graph.num_vertices()) throw std::invalid_argument("part contains an out-of-range vertex");
    if (s.member[v]) throw std::invalid_argument("part contains a repeated vertex");
    s.member[v] = 1;
  }
  s.inside.assign(graph.num_vertices(), 0);
  for (Vertex v : part) {
    for (Vertex w : graph.neighbors(v)) s.inside[v] += s.member[w];
  }
  s.members.assign(part.begin(), part.end());
  return s;
}

CoreResult finish_peel(PeelState& s, std::vector<Vertex> order) {
  CoreResult r;
  for (Vertex v : s.members) {
    if (s.member[v]) r.core_vertices.push_back(v);
  }
  std::sort(r.core_vertices.begin(), r.core_vertices.end());
  r.peel_order = std::move(order);
  return r;
}

std::vector<Vertex> positive_part(const SpinState& state) {
  std::vector<Vertex> part;
  for (Vertex v = 0; v < state.size(); ++v) {
    if (state[v] > 0) part.push_back(v);
  }
  return part;
}

}  // namespace

CoreResult peel_to_core(const Graph& graph, std::span<const Vertex> part) {
  PeelState s = start_peel(graph, part);
  std::deque<Vertex> queue;
  std::vector<char> queued(graph.num_vertices(), 0);
  for (Vertex v : s.members) {
    if (s.violates(v)) {
      queue.push_back(v);
      queued[v] = 1;
    }
  }
  std::vector<Vertex> order;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    s.member[v] = 0;
    order.push_back(v);
    for (Vertex w : graph.neighbors(v)) {
      if (!s.member[w]) continue;
      --s.inside[w];
      if (!queued[w] && s.violates(w)) {
        queue.push_back(w);
        queued[w] = 1;
      }
    }
  }
  return finish_peel(s, std::move(order));
}

CoreResult peel_to_core_randomized(const Graph& graph, std::span<const Vertex> part, Rng& rng) {
  PeelState s = start_peel(graph, part);
  // Violators only accumulate until removed, so a swap-remove bag suffices.
  std::vector<Vertex> bag;
  std::vector<char> in_bag(graph.num_vertices(), 0);
  for (Vertex v : s.members) {
    if (s.violates(v)) {
      bag.push_back(v);
      in_bag[v] = 1;
    }
  }
  std::vector<Vertex> order;
  while (!bag.empty()) {
    const std::size_t pick = rng.below(bag.size());
    const Vertex v = bag[pick];
    bag[pick] = bag.back();
    bag.pop_back();
    s.member[v] = 0;
    order.push_back(v);
    for (Vertex w : graph.neighbors(v)) {
      if (!s.member[w]) continue;
      --s.inside[w];
      if (!in_bag[w] && s.violates(w)) {
        bag.push_back(w);
        in_bag[w] = 1;
      }
    }
  }
  return finish_peel(s, std::move(order));
}

bool has_positive_core(const Graph& graph, const SpinState& state) {
  if (state.size() != graph.num_vertices()) throw std::invalid_argument("state size differs from vertex count");
  if (state.has_zeros()) throw std::invalid_argument("positive core search expects a ±1 state");
  const auto part = positive_part(state);
  return !peel_to_core(graph, part).empty();
}

bool is_internal_cut(const Graph& graph, const SpinState& state) {
  if (state.size() != graph.num_vertices()) throw std::invalid_argument("state size differs from vertex count");
  const std::size_t plus = state.count(1);
  if (plus == 0 || plus == state.size()) return false;
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    if (is_unsatisfied(graph, state, v)) return false;
  }
  return true;
}

SpinState neutral_to_negative(const SpinState& state) {
  std::vector<Spin> values(state.values().begin(), state.values().end());
  for (auto& s : values) {
    if (s == 0) s = -1;
  }
  return SpinState(std::move(values));
}

bool md0_core_probe(const Graph& graph, const SpinState& initial, std::size_t k) {
  if (initial.size() != graph.num_vertices()) throw std::invalid_argument("state size differs from vertex count");
  if (initial.has_zeros()) throw std::invalid_argument("MD0 core probe starts from a ±1 state");
  SpinState cur = initial, next;
  for (std::size_t i = 0; i < k; ++i) {
    md0_step_into(graph, cur, next);
    std::swap(cur, next);
  }
  return has_positive_core(graph, neutral_to_negative(cur));
}

}  // namespace majdyn
