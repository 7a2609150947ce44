#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "majdyn/graph.hpp"
#include "majdyn/rng.hpp"

namespace majdyn {

using Spin = std::int8_t;

/// Per-vertex configuration over {-1, 0, +1}. Majority dynamics and the swap
/// process only ever see ±1; zeros appear under MD0.
class SpinState {
 public:
  SpinState() = default;
  explicit SpinState(std::size_t n, Spin fill = 1);
  /// Throws std::invalid_argument if any entry is outside {-1, 0, +1}.
  explicit SpinState(std::vector<Spin> values);

  /// iid uniform ±1 per vertex, one draw per vertex in index order.
  static SpinState random(std::size_t n, Rng& rng);
  /// Inverse of to_string(): one of '-', '0', '+' per vertex.
  static SpinState parse(std::string_view text);

  std::size_t size() const noexcept { return values_.size(); }
  Spin operator[](std::size_t i) const noexcept { return values_[i]; }
  void set(std::size_t i, Spin s);
  std::span<const Spin> values() const noexcept { return values_; }

  bool has_zeros() const noexcept;
  std::size_t count(Spin s) const noexcept;
  std::string to_string() const;

  friend bool operator==(const SpinState&, const SpinState&) = default;

 private:
  friend class SwapProcess;
  friend void md_step_into(const Graph&, const SpinState&, SpinState&);
  friend void md0_step_into(const Graph&, const SpinState&, SpinState&);
  std::vector<Spin> values_;
};

enum class Dynamics {
  kMajority,           // MD
  kMajorityWithZeros,  // MD0
};

std::string_view to_string(Dynamics dynamics);

/// Converged pair x^T, x^{T+1} with x^{T+2} = x^T.
struct LimitCycle {
  SpinState state_a;
  SpinState state_b;
  int period = 1;                 // 1 or 2
  std::size_t steps_to_cycle = 0; // T
  std::vector<bool> oscillating;  // state_a[i] != state_b[i]

  std::size_t num_oscillating() const noexcept;
};

/// Thrown when run_to_limit_cycle exhausts its step budget. Carries the last
/// two states of the trajectory.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(std::size_t steps, SpinState previous, SpinState last);
  std::size_t steps() const noexcept { return steps_; }
  const SpinState& previous() const noexcept { return previous_; }
  const SpinState& last() const noexcept { return last_; }

 private:
  std::size_t steps_;
  SpinState previous_;
  SpinState last_;
};

/// True iff strictly more neighbors of v sit in the opposite part than in
/// v's own part. Ties are satisfied. Throws std::invalid_argument if v or any
/// of its neighbors is neutral.
bool is_unsatisfied(const Graph& graph, const SpinState& state, Vertex v);

/// One synchronous majority step: sign of the neighbor sum, previous value on
/// a zero sum. Throws std::invalid_argument on zeros or a size mismatch.
SpinState md_step(const Graph& graph, const SpinState& state);

/// One synchronous MD0 step: x_i <- clip(x_i + sgn(sum of neighbors)).
/// Throws std::invalid_argument on a size mismatch.
SpinState md0_step(const Graph& graph, const SpinState& state);

/// Double-buffered forms; `out` is resized as needed and must not alias `in`.
void md_step_into(const Graph& graph, const SpinState& in, SpinState& out);
void md0_step_into(const Graph& graph, const SpinState& in, SpinState& out);

/// 10*m + 100.
std::size_t default_max_steps(const Graph& graph) noexcept;

/// Called with (t, x^t) for every visited state, starting at t = 0.
using TrajectoryObserver = std::function<void(std::size_t, const SpinState&)>;

/// Iterates the stepper until x^t equals x^{t-1} (period 1) or x^{t-2}
/// (period 2), at most max_steps steps. Throws NonConvergenceError when the
/// cap is hit, std::invalid_argument if MD is given an initial state with zeros.
LimitCycle run_to_limit_cycle(const Graph& graph, const SpinState& initial, Dynamics dynamics,
                              std::size_t max_steps, const TrajectoryObserver& observer = {});

/// Fraction of vertices that oscillate; 0 for an empty graph.
double oscillating_fraction(const LimitCycle& cycle) noexcept;

/// Number of edges whose endpoints disagree.
std::size_t cut_size(const Graph& graph, const SpinState& state);

/// Flips one unsatisfied vertex chosen uniformly (the rng.below(count)-th in
/// increasing vertex order); std::nullopt when every vertex is satisfied.
std::optional<SpinState> swap_step(const Graph& graph, const SpinState& state, Rng& rng);

/// Incremental swap process. Makes the same choices as repeated swap_step
/// calls with the same rng, in O(d + log n) per step.
class SwapProcess {
 public:
  SwapProcess(const Graph& graph, SpinState initial);

  /// Performs one swap; returns false (and consumes no randomness) at a fixed point.
  bool step(Rng& rng);
  /// Runs until a fixed point or until `limit` swaps have been made in total.
  void run(Rng& rng, std::size_t limit = SIZE_MAX);

  const SpinState& state() const noexcept { return state_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t cut_size() const noexcept { return cut_; }
  std::size_t num_unsatisfied() const noexcept { return num_unsatisfied_; }
  bool at_fixed_point() const noexcept { return num_unsatisfied_ == 0; }

 private:
  bool unsatisfied(Vertex v) const noexcept { return 2 * opposite_[v] > graph_->degree(v); }
  void fenwick_add(std::size_t i, int delta) noexcept;
  Vertex fenwick_select(std::size_t rank) const noexcept;

  const Graph* graph_;
  SpinState state_;
  std::vector<std::uint32_t> opposite_;
  std::vector<std::int32_t> tree_;
  std::vector<bool> flagged_;
  std::size_t num_unsatisfied_ = 0;
  std::size_t steps_ = 0;
  std::size_t cut_ = 0;
};

struct SwapResult {
  SpinState final_state;
  std::size_t steps = 0;
};

/// Swaps until no vertex is unsatisfied; at most m swaps.
SwapResult run_swap_process(const Graph& graph, const SpinState& initial, Rng& rng);

/// Red edges join disagreeing endpoints, blue edges agreeing ones. Indexed by
/// the graph's edge ids.
struct EdgeColoring {
  std::vector<bool> red;
  std::vector<std::uint32_t> deg_red;
  std::vector<std::uint32_t> deg_blue;

  /// Tallies degrees for an arbitrary red mask.
  static EdgeColoring from_red_mask(const Graph& graph, std::vector<bool> red);

  friend bool operator==(const EdgeColoring&, const EdgeColoring&) = default;
};

/// Throws std::invalid_argument on zeros.
EdgeColoring coloring_from_state(const Graph& graph, const SpinState& state);

/// An edge changes color iff exactly one endpoint has a strict red majority.
EdgeColoring edge_dynamics_step(const Graph& graph, const EdgeColoring& coloring);

/// Every red edge becomes blue and vice versa.
EdgeColoring swap_colors(const Graph& graph, const EdgeColoring& coloring);

/// "step <t> <values>" with values rendered by SpinState::to_string().
std::string trajectory_line(std::size_t t, const SpinState& state);

}  // namespace majdyn
