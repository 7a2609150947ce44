#include "majdyn/dynamics.hpp"

#include <algorithm>
#include <bit>

namespace majdyn {

namespace {

void require_no_zeros(const SpinState& state, std::string_view what) {
  if (state.has_zeros()) {
    throw std::invalid_argument(std::string(what) + " is only defined for ±1 states");
  }
}

void require_size(const Graph& graph, const SpinState& state) {
  if (state.size() != graph.num_vertices()) {
    throw std::invalid_argument("state has " + std::to_string(state.size()) + " entries but graph has " +
                                std::to_string(graph.num_vertices()) + " vertices");
  }
}

int neighbor_sum(const Graph& graph, std::span<const Spin> x, Vertex v) noexcept {
  int sum = 0;
  for (Vertex w : graph.neighbors(v)) sum += x[w];
  return sum;
}

constexpr Spin sign(int v) noexcept { return static_cast<Spin>((v > 0) - (v < 0)); }

}  // namespace

SpinState::SpinState(std::size_t n, Spin fill) : values_(n, fill) {
  if (fill < -1 || fill > 1) throw std::invalid_argument("spin values must lie in {-1, 0, +1}");
}

SpinState::SpinState(std::vector<Spin> values) : values_(std::move(values)) {
  for (Spin s : values_) {
    if (s < -1 || s > 1) throw std::invalid_argument("spin values must lie in {-1, 0, +1}");
  }
}

SpinState SpinState::random(std::size_t n, Rng& rng) {
  SpinState s;
  s.values_.resize(n);
  for (auto& v : s.values_) v = rng.spin();
  return s;
}

SpinState SpinState::parse(std::string_view text) {
  SpinState s;
  s.values_.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '-': s.values_.push_back(-1); break;
      case '0': s.values_.push_back(0); break;
      case '+': s.values_.push_back(1); break;
      default: throw std::invalid_argument(std::string("invalid spin character '") + c + "'");
    }
  }
  return s;
}

void SpinState::set(std::size_t i, Spin s) {
  if (s < -1 || s > 1) throw std::invalid_argument("spin values must lie in {-1, 0, +1}");
  values_.at(i) = s;
}

bool SpinState::has_zeros() const noexcept {
  return std::find(values_.begin(), values_.end(), Spin{0}) != values_.end();
}

std::size_t SpinState::count(Spin s) const noexcept {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), s));
}

std::string SpinState::to_string() const {
  std::string out(values_.size(), '0');
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > 0) out[i] = '+';
    else if (values_[i] < 0) out[i] = '-';
  }
  return out;
}

std::string_view to_string(Dynamics dynamics) {
  return dynamics == Dynamics::kMajority ? "md" : "md0";
}

std::size_t LimitCycle::num_oscillating() const noexcept {
  return static_cast<std::size_t>(std::count(oscillating.begin(), oscillating.end(), true));
}

NonConvergenceError::NonConvergenceError(std::size_t steps, SpinState previous, SpinState last)
    : std::runtime_error("no limit cycle of period <= 2 within " + std::to_string(steps) + " steps"),
      steps_(steps),
      previous_(std::move(previous)),
      last_(std::move(last)) {}

bool is_unsatisfied(const Graph& graph, const SpinState& state, Vertex v) {
  require_size(graph, state);
  if (v >= graph.num_vertices()) throw std::invalid_argument("vertex out of range");
  const Spin own = state[v];
  if (own == 0) throw std::invalid_argument("satisfaction is undefined for a neutral vertex");
  std::size_t same = 0, opposite = 0;
  for (Vertex w : graph.neighbors(v)) {
    if (state[w] == 0) throw std::invalid_argument("satisfaction is undefined next to a neutral vertex");
    (state[w] == own ? same : opposite)++;
  }
  return opposite > same;
}

void md_step_into(const Graph& graph, const SpinState& in, SpinState& out) {
  const std::size_t n = graph.num_vertices();
  out.values_.resize(n);
  const auto x = in.values();
  for (Vertex v = 0; v < n; ++v) {
    const int sum = neighbor_sum(graph, x, v);
    out.values_[v] = sum == 0 ? x[v] : sign(sum);
  }
}

void md0_step_into(const Graph& graph, const SpinState& in, SpinState& out) {
  const std::size_t n = graph.num_vertices();
  out.values_.resize(n);
  const auto x = in.values();
  for (Vertex v = 0; v < n; ++v) {
    const int moved = x[v] + sign(neighbor_sum(graph, x, v));
    out.values_[v] = static_cast<Spin>(std::clamp(moved, -1, 1));
  }
}

SpinState md_step(const Graph& graph, const SpinState& state) {
  require_size(graph, state);
  require_no_zeros(state, "majority dynamics");
  SpinState out;
  md_step_into(graph, state, out);
  return out;
}

SpinState md0_step(const Graph& graph, const SpinState& state) {
  require_size(graph, state);
  SpinState out;
  md0_step_into(graph, state, out);
  return out;
}

std::size_t default_max_steps(const Graph& graph) noexcept { return 10 * graph.num_edges() + 100; }

LimitCycle run_to_limit_cycle(const Graph& graph, const SpinState& initial, Dynamics dynamics,
                              std::size_t max_steps, const TrajectoryObserver& observer) {
  require_size(graph, initial);
  if (dynamics == Dynamics::kMajority) require_no_zeros(initial, "majority dynamics");
  const auto step = dynamics == Dynamics::kMajority ? &md_step_into : &md0_step_into;

  // Rotating buffers holding x^{t-2}, x^{t-1}, x^t.
  SpinState older, prev = initial, cur;
  if (observer) observer(0, prev);
  for (std::size_t t = 1; t <= max_steps; ++t) {
    step(graph, prev, cur);
    if (observer) observer(t, cur);
    int period = 0;
    if (cur == prev) period = 1;
    else if (t >= 2 && cur == older) period = 2;
    if (period != 0) {
      LimitCycle cycle;
      cycle.period = period;
      cycle.steps_to_cycle = t - static_cast<std::size_t>(period);
      if (period == 1) {
        cycle.state_a = cur;
        cycle.state_b = std::move(cur);
      } else {
        cycle.state_a = std::move(older);
        cycle.state_b = std::move(prev);
      }
      cycle.oscillating.resize(graph.num_vertices());
      for (std::size_t i = 0; i < graph.num_vertices(); ++i) {
        cycle.oscillating[i] = cycle.state_a[i] != cycle.state_b[i];
      }
      return cycle;
    }
    std::swap(older, prev);
    std::swap(prev, cur);
  }
  throw NonConvergenceError(max_steps, std::move(older), std::move(prev));
}

double oscillating_fraction(const LimitCycle& cycle) noexcept {
  if (cycle.oscillating.empty()) return 0.0;
  return static_cast<double>(cycle.num_oscillating()) / static_cast<double>(cycle.oscillating.size());
}

std::size_t cut_size(const Graph& graph, const SpinState& state) {
  require_size(graph, state);
  std::size_t cut = 0;
  for (const auto& e : graph.edges()) cut += state[e.u] != state[e.v];
  return cut;
}

std::optional<SpinState> swap_step(const Graph& graph, const SpinState& state, Rng& rng) {
  require_size(graph, state);
  require_no_zeros(state, "the swap process");
  std::vector<Vertex> unsatisfied;
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    if (is_unsatisfied(graph, state, v)) unsatisfied.push_back(v);
  }
  if (unsatisfied.empty()) return std::nullopt;
  const Vertex chosen = unsatisfied[rng.below(unsatisfied.size())];
  SpinState next = state;
  next.set(chosen, static_cast<Spin>(-state[chosen]));
  return next;
}

SwapProcess::SwapProcess(const Graph& graph, SpinState initial)
    : graph_(&graph), state_(std::move(initial)) {
  require_size(graph, state_);
  require_no_zeros(state_, "the swap process");
  const std::size_t n = graph.num_vertices();
  opposite_.assign(n, 0);
  for (const auto& e : graph.edges()) {
    if (state_[e.u] != state_[e.v]) {
      ++opposite_[e.u];
      ++opposite_[e.v];
      ++cut_;
    }
  }
  tree_.assign(n + 1, 0);
  flagged_.assign(n, false);
  for (Vertex v = 0; v < n; ++v) {
    if (unsatisfied(v)) {
      flagged_[v] = true;
      fenwick_add(v, 1);
      ++num_unsatisfied_;
    }
  }
}

void SwapProcess::fenwick_add(std::size_t i, int delta) noexcept {
  for (std::size_t k = i + 1; k < tree_.size(); k += k & (0 - k)) tree_[k] += delta;
}

Vertex SwapProcess::fenwick_select(std::size_t rank) const noexcept {
  // Smallest position whose prefix count exceeds rank.
  std::size_t pos = 0;
  const std::size_t n = tree_.size() - 1;
  for (std::size_t step = std::bit_floor(n); step > 0; step >>= 1) {
    if (pos + step <= n && static_cast<std::size_t>(tree_[pos + step]) <= rank) {
      pos += step;
      rank -= static_cast<std::size_t>(tree_[pos]);
    }
  }
  return static_cast<Vertex>(pos);
}

bool SwapProcess::step(Rng& rng) {
  if (num_unsatisfied_ == 0) return false;
  const Vertex v = fenwick_select(rng.below(num_unsatisfied_));
  const Spin flipped = static_cast<Spin>(-state_[v]);
  state_.values_[v] = flipped;
  const auto deg = static_cast<std::uint32_t>(graph_->degree(v));
  cut_ = cut_ - opposite_[v] + (deg - opposite_[v]);
  opposite_[v] = deg - opposite_[v];

  auto refresh = [this](Vertex w) {
    const bool now = unsatisfied(w);
    if (now != flagged_[w]) {
      flagged_[w] = now;
      fenwick_add(w, now ? 1 : -1);
      num_unsatisfied_ += now ? 1 : -1;
    }
  };
  for (Vertex w : graph_->neighbors(v)) {
    if (state_[w] == flipped) --opposite_[w];
    else ++opposite_[w];
    refresh(w);
  }
  refresh(v);
  ++steps_;
  return true;
}

void SwapProcess::run(Rng& rng, std::size_t limit) {
  while (steps_ < limit && step(rng)) {
  }
}

SwapResult run_swap_process(const Graph& graph, const SpinState& initial, Rng& rng) {
  SwapProcess process(graph, initial);
  process.run(rng);
  return {process.state(), process.steps()};
}

EdgeColoring EdgeColoring::from_red_mask(const Graph& graph, std::vector<bool> red) {
  if (red.size() != graph.num_edges()) throw std::invalid_argument("red mask size differs from edge count");
  EdgeColoring c;
  c.red = std::move(red);
  c.deg_red.assign(graph.num_vertices(), 0);
  c.deg_blue.assign(graph.num_vertices(), 0);
  for (EdgeId id = 0; id < graph.num_edges(); ++id) {
    const auto [u, v] = graph.edges()[id];
    auto& deg = c.red[id] ? c.deg_red : c.deg_blue;
    ++deg[u];
    ++deg[v];
  }
  return c;
}

EdgeColoring coloring_from_state(const Graph& graph, const SpinState& state) {
  require_size(graph, state);
  require_no_zeros(state, "edge coloring");
  std::vector<bool> red(graph.num_edges());
  for (EdgeId id = 0; id < graph.num_edges(); ++id) {
    const auto [u, v] = graph.edges()[id];
    red[id] = state[u] != state[v];
  }
  return EdgeColoring::from_red_mask(graph, std::move(red));
}

EdgeColoring edge_dynamics_step(const Graph& graph, const EdgeColoring& coloring) {
  const std::size_t n = graph.num_vertices();
  std::vector<bool> red_majority(n);
  for (Vertex v = 0; v < n; ++v) red_majority[v] = 2 * std::size_t{coloring.deg_red[v]} > graph.degree(v);
  std::vector<bool> red(graph.num_edges());
  for (EdgeId id = 0; id < graph.num_edges(); ++id) {
    const auto [u, v] = graph.edges()[id];
    red[id] = coloring.red[id] != (red_majority[u] != red_majority[v]);
  }
  return EdgeColoring::from_red_mask(graph, std::move(red));
}

EdgeColoring swap_colors(const Graph& graph, const EdgeColoring& coloring) {
  std::vector<bool> red = coloring.red;
  red.flip();
  return EdgeColoring::from_red_mask(graph, std::move(red));
}

std::string trajectory_line(std::size_t t, const SpinState& state) {
  return "step " + std::to_string(t) + " " + state.to_string();
}

}  // namespace majdyn
