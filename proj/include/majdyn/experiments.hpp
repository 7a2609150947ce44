#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "majdyn/dynamics.hpp"
#include "majdyn/graph.hpp"

namespace majdyn {

enum class ExperimentKind {
  kOscillationRegular,
  kOscillationEr,
  kCoreAfterMd,
  kSwapInternalCut,
  kSwapCoreVsSteps,
  kMd0CoreVsK,
  kMd0TypeCensus,
};

std::string_view to_string(ExperimentKind kind);
/// Accepts the names printed by to_string, e.g. "oscillation-regular".
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
bool uses_regular_graphs(ExperimentKind kind) noexcept;

/// Swap-step checkpoint, either absolute ("2500") or relative to n ("0.25n").
struct StepCheckpoint {
  double value = 0;
  bool relative_to_n = false;

  static StepCheckpoint parse(std::string_view text);
  std::size_t resolve(std::size_t n) const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kOscillationRegular;
  std::vector<double> d_values;
  std::vector<std::size_t> n_values;
  std::size_t trials = 100;
  std::vector<std::size_t> k_values;           // md0 kinds
  std::vector<StepCheckpoint> checkpoints;     // swap-core-vs-steps
  std::uint64_t master_seed = 0;
  std::optional<std::size_t> max_steps;        // default_max_steps(graph) when unset
  unsigned workers = 0;                        // 0: hardware concurrency

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

/// Measurements of one trial. Fields that do not apply to the kind stay empty.
struct TrialRecord {
  ExperimentKind kind = ExperimentKind::kOscillationRegular;
  double d = 0;
  std::size_t n = 0;
  std::size_t trial_index = 0;
  std::uint64_t trial_seed = 0;
  std::optional<std::size_t> steps_to_cycle;  // T; the cap when not converged
  std::optional<int> period;                  // 0 flags a cap hit
  std::optional<double> oscillating_fraction;
  std::optional<bool> has_positive_core;
  std::optional<bool> reached_internal_cut;
  std::optional<std::size_t> swap_steps;
  std::optional<std::size_t> k;               // MD0 steps, or the swap checkpoint

  bool cap_hit() const noexcept { return period && *period == 0; }
  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Pure function of its arguments; the kind enters through a fixed tag and d
/// through its IEEE-754 bit pattern.
std::uint64_t trial_seed(std::uint64_t master_seed, ExperimentKind kind, double d, std::size_t n,
                         std::size_t trial_index) noexcept;

/// The graph a trial runs on: random regular for regular kinds, G(n, d/n) otherwise.
Graph trial_graph(ExperimentKind kind, double d, std::size_t n, std::uint64_t trial_seed);
/// Uniform ±1 starting state of a trial.
SpinState trial_initial_state(std::size_t n, std::uint64_t trial_seed);
/// Seed of the stream driving the swap process of a trial.
std::uint64_t trial_process_seed(std::uint64_t trial_seed) noexcept;

std::vector<TrialRecord> run_oscillation_histogram(const ExperimentConfig& config);
std::vector<TrialRecord> run_core_after_md(const ExperimentConfig& config);
std::vector<TrialRecord> run_swap_experiments(const ExperimentConfig& config);
std::vector<TrialRecord> run_md0_core_vs_k(const ExperimentConfig& config);

/// Counts of per-vertex MD0 trajectory signatures (x^0, ..., x^k), indexed in
/// base 3 with x^0 most significant and digits '-' < '0' < '+'.
using TypeCensus = std::vector<std::uint64_t>;

TypeCensus md0_type_census(const Graph& graph, const SpinState& initial, std::size_t k = 4);
/// Signature string of a census index, e.g. "+0--+".
std::string census_signature(std::size_t index, std::size_t length);

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::optional<TypeCensus> census;  // md0-type-census only; summed over trials
  std::size_t census_steps = 0;

  bool any_cap_hit() const noexcept;
};

/// Census run: one record per trial (k and the positive-core probe after k
/// MD0 steps) plus the summed census. Needs exactly one (d, n) point.
ExperimentResult run_md0_type_census(const ExperimentConfig& config);

/// Validates and dispatches on config.kind. Records come out ordered by d,
/// then n, then trial index, then k or checkpoint, whatever the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string_view csv_header();
std::string to_csv_row(const TrialRecord& record);
void write_csv(std::ostream& out, std::span<const TrialRecord> records);
void write_census_csv(std::ostream& out, const TypeCensus& census, std::size_t k);

struct WilsonInterval {
  double lower = 0;
  double upper = 0;
};

/// Wilson score interval; z = 1.96 gives 95% coverage.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Aggregate over the records sharing (kind, d, n, k).
struct GroupSummary {
  ExperimentKind kind{};
  double d = 0;
  std::size_t n = 0;
  std::optional<std::size_t> k;
  std::size_t trials = 0;
  std::size_t cap_hits = 0;
  std::size_t outcomes = 0;     // records carrying the kind's boolean outcome
  std::size_t successes = 0;
  std::optional<double> probability;
  std::optional<WilsonInterval> interval;
  std::optional<double> mean_fraction;
  std::size_t fraction_count = 0;
};

std::vector<GroupSummary> summarize(std::span<const TrialRecord> records);
std::string format_summary(const GroupSummary& summary);

}  // namespace majdyn
