#include "majdyn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "majdyn/cores.hpp"
#include "majdyn/graphgen.hpp"
#include "majdyn/rng.hpp"

namespace majdyn {

namespace {

struct KindName {
  ExperimentKind kind;
  std::string_view name;
  std::uint64_t seed_tag;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::kOscillationRegular, "oscillation-regular", 0x6f7363726567ULL},
    {ExperimentKind::kOscillationEr, "oscillation-er", 0x6f73636572ULL},
    {ExperimentKind::kCoreAfterMd, "core-after-md", 0x636f72656d64ULL},
    {ExperimentKind::kSwapInternalCut, "swap-internal-cut", 0x7377696e74ULL},
    {ExperimentKind::kSwapCoreVsSteps, "swap-core-vs-steps", 0x737763727374ULL},
    {ExperimentKind::kMd0CoreVsK, "md0-core-vs-k", 0x6d6430636bULL},
    {ExperimentKind::kMd0TypeCensus, "md0-type-census", 0x6d64306373ULL},
};

const KindName& lookup(ExperimentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw std::logic_error("unhandled experiment kind");
}

constexpr std::size_t kDefaultCensusSteps = 4;

std::size_t census_steps(const ExperimentConfig& config) {
  return config.k_values.size() == 1 ? config.k_values.front() : kDefaultCensusSteps;
}

std::string format_double(double v, int precision = 0) {
  char buf[64];
  auto r = precision > 0 ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision)
                         : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Point {
  double d;
  std::size_t n;
};

std::vector<Point> points_of(const ExperimentConfig& config) {
  std::vector<Point> points;
  for (double d : config.d_values)
    for (std::size_t n : config.n_values) points.push_back({d, n});
  return points;
}

TrialRecord base_record(const ExperimentConfig& config, const Point& p, std::size_t trial, std::uint64_t seed) {
  TrialRecord r;
  r.kind = config.kind;
  r.d = p.d;
  r.n = p.n;
  r.trial_index = trial;
  r.trial_seed = seed;
  return r;
}

using TrialFn = std::function<std::vector<TrialRecord>(const Point&, std::size_t, std::uint64_t)>;

// Runs every (point, trial) unit on a pool and concatenates the per-unit
// records in unit order, so the output does not depend on scheduling.
std::vector<TrialRecord> run_trials(const ExperimentConfig& config, const TrialFn& trial_fn) {
  config.validate();
  const auto points = points_of(config);
  const std::size_t units = points.size() * config.trials;
  std::vector<std::vector<TrialRecord>> slots(units);

  unsigned workers = config.workers != 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(units, 1)));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t unit = next.fetch_add(1);
      if (unit >= units || failed.load()) return;
      const Point& p = points[unit / config.trials];
      const std::size_t trial = unit % config.trials;
      try {
        slots[unit] = trial_fn(p, trial, trial_seed(config.master_seed, config.kind, p.d, p.n, trial));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  std::vector<TrialRecord> records;
  for (auto& slot : slots) std::move(slot.begin(), slot.end(), std::back_inserter(records));
  return records;
}

void require_kind(const ExperimentConfig& config, std::initializer_list<ExperimentKind> allowed,
                  std::string_view runner) {
  if (std::find(allowed.begin(), allowed.end(), config.kind) == allowed.end()) {
    throw std::invalid_argument(std::string(runner) + " cannot run kind " + std::string(to_string(config.kind)));
  }
}

std::size_t cap_for(const ExperimentConfig& config, const Graph& graph) {
  return config.max_steps.value_or(default_max_steps(graph));
}

}  // namespace

std::string_view to_string(ExperimentKind kind) { return lookup(kind).name; }

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

bool uses_regular_graphs(ExperimentKind kind) noexcept { return kind != ExperimentKind::kOscillationEr; }

StepCheckpoint StepCheckpoint::parse(std::string_view text) {
  StepCheckpoint c;
  if (!text.empty() && text.back() == 'n') {
    c.relative_to_n = true;
    text.remove_suffix(1);
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), c.value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !(c.value >= 0) ||
      !std::isfinite(c.value)) {
    throw std::invalid_argument("bad checkpoint '" + std::string(text) + "'");
  }
  if (!c.relative_to_n && c.value != std::floor(c.value)) {
    throw std::invalid_argument("absolute checkpoint must be an integer step count");
  }
  return c;
}

std::size_t StepCheckpoint::resolve(std::size_t n) const {
  return static_cast<std::size_t>(std::floor(relative_to_n ? value * static_cast<double>(n) : value));
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& why) { throw std::invalid_argument(why); };
  if (trials < 1) fail("trials must be >= 1");
  if (d_values.empty()) fail("at least one d value is required");
  if (n_values.empty()) fail("at least one n value is required");
  for (std::size_t n : n_values) {
    if (n < 1) fail("n must be >= 1");
  }
  for (double d : d_values) {
    if (!std::isfinite(d) || d < 0) fail("d must be a non-negative number");
    if (uses_regular_graphs(kind)) {
      if (d != std::floor(d)) fail("regular graphs need an integer d");
      for (std::size_t n : n_values) {
        const auto di = static_cast<std::size_t>(d);
        if (di >= n) fail("regular graphs need d < n");
        if ((di * n) % 2 != 0) fail("n*d must be even for d-regular graphs");
      }
    } else {
      for (std::size_t n : n_values) {
        if (d > static_cast<double>(n)) fail("G(n, d/n) needs d <= n");
      }
    }
  }
  if (kind == ExperimentKind::kMd0CoreVsK && k_values.empty()) fail("md0-core-vs-k needs k values");
  if (kind == ExperimentKind::kMd0TypeCensus) {
    if (k_values.size() > 1) fail("md0-type-census takes a single k");
    if (d_values.size() != 1 || n_values.size() != 1) fail("md0-type-census takes a single d and a single n");
  }
  if (kind == ExperimentKind::kSwapCoreVsSteps) {
    if (checkpoints.empty()) fail("swap-core-vs-steps needs checkpoints");
    for (std::size_t n : n_values) {
      for (std::size_t i = 1; i < checkpoints.size(); ++i) {
        if (checkpoints[i].resolve(n) < checkpoints[i - 1].resolve(n)) fail("checkpoints must be ascending");
      }
    }
  }
  if (!std::is_sorted(k_values.begin(), k_values.end())) fail("k values must be ascending");
}

std::uint64_t trial_seed(std::uint64_t master_seed, ExperimentKind kind, double d, std::size_t n,
                         std::size_t trial_index) noexcept {
  return derive_seed({master_seed, lookup(kind).seed_tag, std::bit_cast<std::uint64_t>(d),
                      static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial_index)});
}

Graph trial_graph(ExperimentKind kind, double d, std::size_t n, std::uint64_t seed) {
  const std::uint64_t graph_seed = derive_seed({seed, 1});
  if (uses_regular_graphs(kind)) return gen_random_regular(n, static_cast<std::size_t>(d), graph_seed);
  return gen_erdos_renyi(n, d, graph_seed);
}

SpinState trial_initial_state(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed({seed, 2}));
  return SpinState::random(n, rng);
}

std::uint64_t trial_process_seed(std::uint64_t seed) noexcept { return derive_seed({seed, 3}); }

std::vector<TrialRecord> run_oscillation_histogram(const ExperimentConfig& config) {
  require_kind(config, {ExperimentKind::kOscillationRegular, ExperimentKind::kOscillationEr},
               "run_oscillation_histogram");
  return run_trials(config, [&](const Point& p, std::size_t trial, std::uint64_t seed) {
    TrialRecord r = base_record(config, p, trial, seed);
    const Graph g = trial_graph(config.kind, p.d, p.n, seed);
    const std::size_t cap = cap_for(config, g);
    try {
      const LimitCycle cycle = run_to_limit_cycle(g, trial_initial_state(p.n, seed), Dynamics::kMajority, cap);
      r.steps_to_cycle = cycle.steps_to_cycle;
      r.period = cycle.period;
      r.oscillating_fraction = oscillating_fraction(cycle);
    } catch (const NonConvergenceError&) {
      r.steps_to_cycle = cap;
      r.period = 0;
    }
    return std::vector{r};
  });
}

std::vector<TrialRecord> run_core_after_md(const ExperimentConfig& config) {
  require_kind(config, {ExperimentKind::kCoreAfterMd}, "run_core_after_md");
  return run_trials(config, [&](const Point& p, std::size_t trial, std::uint64_t seed) {
    TrialRecord r = base_record(config, p, trial, seed);
    const Graph g = trial_graph(config.kind, p.d, p.n, seed);
    const std::size_t cap = cap_for(config, g);
    try {
      const LimitCycle cycle = run_to_limit_cycle(g, trial_initial_state(p.n, seed), Dynamics::kMajority, cap);
      r.steps_to_cycle = cycle.steps_to_cycle;
      r.period = cycle.period;
      r.oscillating_fraction = oscillating_fraction(cycle);
      // Cores never disappear under MD, so the limit state settles whether one
      // ever appeared.
      r.has_positive_core = has_positive_core(g, cycle.state_a);
    } catch (const NonConvergenceError&) {
      r.steps_to_cycle = cap;
      r.period = 0;
    }
    return std::vector{r};
  });
}

std::vector<TrialRecord> run_swap_experiments(const ExperimentConfig& config) {
  require_kind(config, {ExperimentKind::kSwapInternalCut, ExperimentKind::kSwapCoreVsSteps}, "run_swap_experiments");
  return run_trials(config, [&](const Point& p, std::size_t trial, std::uint64_t seed) {
    const Graph g = trial_graph(config.kind, p.d, p.n, seed);
    Rng rng(trial_process_seed(seed));
    SwapProcess process(g, trial_initial_state(p.n, seed));
    std::vector<TrialRecord> out;
    if (config.kind == ExperimentKind::kSwapInternalCut) {
      process.run(rng);
      TrialRecord r = base_record(config, p, trial, seed);
      r.reached_internal_cut = is_internal_cut(g, process.state());
      r.swap_steps = process.steps();
      out.push_back(r);
      return out;
    }
    for (const auto& checkpoint : config.checkpoints) {
      const std::size_t target = checkpoint.resolve(p.n);
      process.run(rng, target);
      TrialRecord r = base_record(config, p, trial, seed);
      r.k = target;
      r.swap_steps = process.steps();
      r.has_positive_core = has_positive_core(g, process.state());
      out.push_back(r);
    }
    return out;
  });
}

std::vector<TrialRecord> run_md0_core_vs_k(const ExperimentConfig& config) {
  require_kind(config, {ExperimentKind::kMd0CoreVsK}, "run_md0_core_vs_k");
  return run_trials(config, [&](const Point& p, std::size_t trial, std::uint64_t seed) {
    const Graph g = trial_graph(config.kind, p.d, p.n, seed);
    SpinState cur = trial_initial_state(p.n, seed), next;
    std::size_t done = 0;
    std::vector<TrialRecord> out;
    // One trajectory per trial, probed at each requested k.
    for (std::size_t k : config.k_values) {
      for (; done < k; ++done) {
        md0_step_into(g, cur, next);
        std::swap(cur, next);
      }
      TrialRecord r = base_record(config, p, trial, seed);
      r.k = k;
      r.has_positive_core = has_positive_core(g, neutral_to_negative(cur));
      out.push_back(r);
    }
    return out;
  });
}

TypeCensus md0_type_census(const Graph& graph, const SpinState& initial, std::size_t k) {
  if (initial.size() != graph.num_vertices()) throw std::invalid_argument("state size differs from vertex count");
  if (initial.has_zeros()) throw std::invalid_argument("MD0 type census starts from a ±1 state");
  if (k > 38) throw std::invalid_argument("census signature too long");
  std::size_t types = 1;
  for (std::size_t i = 0; i <= k; ++i) types *= 3;
  if (types > (std::size_t{1} << 24)) throw std::invalid_argument("census signature too long");

  const std::size_t n = graph.num_vertices();
  std::vector<std::size_t> code(n, 0);
  SpinState cur = initial, next;
  for (std::size_t t = 0;; ++t) {
    for (std::size_t v = 0; v < n; ++v) code[v] = 3 * code[v] + static_cast<std::size_t>(cur[v] + 1);
    if (t == k) break;
    md0_step_into(graph, cur, next);
    std::swap(cur, next);
  }
  TypeCensus census(types, 0);
  for (std::size_t c : code) ++census[c];
  return census;
}

std::string census_signature(std::size_t index, std::size_t length) {
  static constexpr char kDigits[] = {'-', '0', '+'};
  std::string s(length, '-');
  for (std::size_t i = length; i-- > 0;) {
    s[i] = kDigits[index % 3];
    index /= 3;
  }
  return s;
}

bool ExperimentResult::any_cap_hit() const noexcept {
  return std::any_of(records.begin(), records.end(), [](const TrialRecord& r) { return r.cap_hit(); });
}

ExperimentResult run_md0_type_census(const ExperimentConfig& config) {
  require_kind(config, {ExperimentKind::kMd0TypeCensus}, "run_md0_type_census");
  config.validate();
  const std::size_t k = census_steps(config);
  std::vector<TypeCensus> per_trial(config.trials);
  std::mutex slot_mutex;
  ExperimentResult result;
  result.census_steps = k;
  result.records = run_trials(config, [&](const Point& p, std::size_t trial, std::uint64_t seed) {
    const Graph g = trial_graph(config.kind, p.d, p.n, seed);
    const SpinState initial = trial_initial_state(p.n, seed);
    TypeCensus census = md0_type_census(g, initial, k);
    {
      std::lock_guard lock(slot_mutex);
      per_trial[trial] = std::move(census);
    }
    TrialRecord r = base_record(config, p, trial, seed);
    r.k = k;
    r.has_positive_core = md0_core_probe(g, initial, k);
    return std::vector{r};
  });
  TypeCensus total(per_trial.front().size(), 0);
  for (const auto& c : per_trial)
    for (std::size_t i = 0; i < c.size(); ++i) total[i] += c[i];
  result.census = std::move(total);
  return result;
}

namespace {

ExperimentResult records_only(std::vector<TrialRecord> records) {
  ExperimentResult r;
  r.records = std::move(records);
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.kind) {
    case ExperimentKind::kOscillationRegular:
    case ExperimentKind::kOscillationEr:
      return records_only(run_oscillation_histogram(config));
    case ExperimentKind::kCoreAfterMd:
      return records_only(run_core_after_md(config));
    case ExperimentKind::kSwapInternalCut:
    case ExperimentKind::kSwapCoreVsSteps:
      return records_only(run_swap_experiments(config));
    case ExperimentKind::kMd0CoreVsK:
      return records_only(run_md0_core_vs_k(config));
    case ExperimentKind::kMd0TypeCensus:
      return run_md0_type_census(config);
  }
  throw std::logic_error("unhandled experiment kind");
}

std::string_view csv_header() {
  return "kind,d,n,trial_index,trial_seed,T_converge,period,oscillating_fraction,has_positive_core,"
         "reached_internal_cut,swap_steps,k";
}

std::string to_csv_row(const TrialRecord& r) {
  auto opt_int = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
  auto opt_bool = [](const std::optional<bool>& v) { return v ? std::string(*v ? "1" : "0") : std::string(); };
  std::string row;
  row += to_string(r.kind);
  row += ',' + format_double(r.d);
  row += ',' + std::to_string(r.n);
  row += ',' + std::to_string(r.trial_index);
  row += ',' + std::to_string(r.trial_seed);
  row += ',' + opt_int(r.steps_to_cycle);
  row += ',' + opt_int(r.period);
  row += ',' + (r.oscillating_fraction ? format_double(*r.oscillating_fraction, 9) : std::string());
  row += ',' + opt_bool(r.has_positive_core);
  row += ',' + opt_bool(r.reached_internal_cut);
  row += ',' + opt_int(r.swap_steps);
  row += ',' + opt_int(r.k);
  return row;
}

void write_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << csv_header() << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

void write_census_csv(std::ostream& out, const TypeCensus& census, std::size_t k) {
  out << "signature,count\n";
  for (std::size_t i = 0; i < census.size(); ++i) out << census_signature(i, k + 1) << ',' << census[i] << '\n';
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double centre = (p + z2 / (2 * nt)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nt + z2 / (4 * nt * nt)) / denom;
  // The bounds are exactly 0 and 1 at the extremes; clamp away rounding.
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

std::vector<GroupSummary> summarize(std::span<const TrialRecord> records) {
  using Key = std::tuple<int, double, std::size_t, std::size_t, bool>;
  std::map<Key, GroupSummary> groups;
  std::vector<Key> order;
  for (const auto& r : records) {
    const Key key{static_cast<int>(r.kind), r.d, r.n, r.k.value_or(0), r.k.has_value()};
    auto [it, inserted] = groups.try_emplace(key);
    GroupSummary& g = it->second;
    if (inserted) {
      order.push_back(key);
      g.kind = r.kind;
      g.d = r.d;
      g.n = r.n;
      g.k = r.k;
      g.mean_fraction = std::nullopt;
    }
    ++g.trials;
    if (r.cap_hit()) ++g.cap_hits;
    const auto outcome = r.kind == ExperimentKind::kSwapInternalCut ? r.reached_internal_cut : r.has_positive_core;
    if (outcome) {
      ++g.outcomes;
      g.successes += *outcome;
    }
    if (r.oscillating_fraction) {
      g.mean_fraction = g.mean_fraction.value_or(0.0) + *r.oscillating_fraction;
      ++g.fraction_count;
    }
  }
  std::vector<GroupSummary> out;
  for (const auto& key : order) {
    GroupSummary g = groups.at(key);
    if (g.outcomes > 0) {
      g.probability = static_cast<double>(g.successes) / static_cast<double>(g.outcomes);
      g.interval = wilson_interval(g.successes, g.outcomes);
    }
    if (g.fraction_count > 0) *g.mean_fraction /= static_cast<double>(g.fraction_count);
    out.push_back(g);
  }
  return out;
}

std::string format_summary(const GroupSummary& s) {
  std::string line = std::string(to_string(s.kind)) + " d=" + format_double(s.d) + " n=" + std::to_string(s.n);
  if (s.k) line += " k=" + std::to_string(*s.k);
  line += " trials=" + std::to_string(s.trials);
  if (s.probability) {
    line += " p=" + format_double(*s.probability, 4) + " wilson95=[" + format_double(s.interval->lower, 4) + ", " +
            format_double(s.interval->upper, 4) + "]";
  }
  if (s.mean_fraction) line += " mean_oscillating_fraction=" + format_double(*s.mean_fraction, 6);
  if (s.cap_hits > 0) line += " cap_hits=" + std::to_string(s.cap_hits);
  return line;
}

}  // namespace majdyn
