#include <doctest.h>

#include <numeric>
#include <sstream>

#include "majdyn/cores.hpp"
#include "majdyn/experiments.hpp"
#include "majdyn/graphgen.hpp"

using namespace majdyn;

namespace {

ExperimentConfig small_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.d_values = {3, 5};
  c.n_values = {200, 400};
  c.trials = 6;
  c.master_seed = 99;
  c.workers = 1;
  if (kind == ExperimentKind::kOscillationEr) c.d_values = {2.5, 5};
  if (kind == ExperimentKind::kMd0CoreVsK) c.k_values = {0, 2, 4};
  if (kind == ExperimentKind::kSwapCoreVsSteps) c.checkpoints = {StepCheckpoint::parse("0"), StepCheckpoint::parse("0.2n"),
                                                                 StepCheckpoint::parse("150")};
  if (kind == ExperimentKind::kMd0TypeCensus) {
    c.d_values = {5};
    c.n_values = {300};
  }
  return c;
}

std::string csv_of(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  write_csv(out, records);
  return out.str();
}

constexpr ExperimentKind kAllKinds[] = {
    ExperimentKind::kOscillationRegular, ExperimentKind::kOscillationEr, ExperimentKind::kCoreAfterMd,
    ExperimentKind::kSwapInternalCut,    ExperimentKind::kSwapCoreVsSteps, ExperimentKind::kMd0CoreVsK,
    ExperimentKind::kMd0TypeCensus,
};

}  // namespace

TEST_CASE("experiment kind names") {
  for (auto kind : kAllKinds) CHECK(parse_experiment_kind(to_string(kind)) == kind);
  CHECK(to_string(ExperimentKind::kSwapCoreVsSteps) == "swap-core-vs-steps");
  CHECK_FALSE(parse_experiment_kind("oscillation").has_value());
}

TEST_CASE("step checkpoints") {
  CHECK(StepCheckpoint::parse("2500").resolve(10000) == 2500);
  CHECK(StepCheckpoint::parse("0.15n").resolve(10000) == 1500);
  CHECK(StepCheckpoint::parse("0.45n").resolve(10000) == 4500);
  CHECK(StepCheckpoint::parse("1n").resolve(77) == 77);
  CHECK_THROWS_AS(StepCheckpoint::parse("2.5"), std::invalid_argument);
  CHECK_THROWS_AS(StepCheckpoint::parse("n"), std::invalid_argument);
  CHECK_THROWS_AS(StepCheckpoint::parse("-1"), std::invalid_argument);
  CHECK_THROWS_AS(StepCheckpoint::parse("0.1x"), std::invalid_argument);
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_config(ExperimentKind::kOscillationRegular);
  CHECK_NOTHROW(c.validate());

  auto rejects = [](ExperimentConfig bad) { CHECK_THROWS_AS(bad.validate(), std::invalid_argument); };
  {
    auto b = c;
    b.trials = 0;
    rejects(b);
  }
  {
    auto b = c;
    b.d_values = {3};
    b.n_values = {201};
    rejects(b);
  }
  {
    auto b = c;
    b.d_values = {2.5};
    rejects(b);
  }
  {
    auto b = c;
    b.d_values = {500};
    rejects(b);
  }
  {
    auto b = c;
    b.d_values.clear();
    rejects(b);
  }
  {
    auto b = small_config(ExperimentKind::kMd0CoreVsK);
    b.k_values.clear();
    rejects(b);
  }
  {
    auto b = small_config(ExperimentKind::kMd0CoreVsK);
    b.k_values = {4, 2};
    rejects(b);
  }
  {
    auto b = small_config(ExperimentKind::kSwapCoreVsSteps);
    b.checkpoints = {StepCheckpoint::parse("0.3n"), StepCheckpoint::parse("0.1n")};
    rejects(b);
  }
  {
    auto b = small_config(ExperimentKind::kSwapCoreVsSteps);
    b.checkpoints.clear();
    rejects(b);
  }
  {
    auto b = small_config(ExperimentKind::kMd0TypeCensus);
    b.n_values = {300, 400};
    rejects(b);
  }
  {
    auto b = small_config(ExperimentKind::kOscillationEr);
    b.d_values = {2.5, 401};
    rejects(b);
  }
  CHECK_NOTHROW(small_config(ExperimentKind::kOscillationEr).validate());
}

TEST_CASE("trial seeds are a pure function of their key") {
  const auto s = trial_seed(1, ExperimentKind::kCoreAfterMd, 5, 10000, 3);
  CHECK(s == trial_seed(1, ExperimentKind::kCoreAfterMd, 5, 10000, 3));
  CHECK(s != trial_seed(2, ExperimentKind::kCoreAfterMd, 5, 10000, 3));
  CHECK(s != trial_seed(1, ExperimentKind::kSwapInternalCut, 5, 10000, 3));
  CHECK(s != trial_seed(1, ExperimentKind::kCoreAfterMd, 7, 10000, 3));
  CHECK(s != trial_seed(1, ExperimentKind::kCoreAfterMd, 5, 1000, 3));
  CHECK(s != trial_seed(1, ExperimentKind::kCoreAfterMd, 5, 10000, 4));
}

TEST_CASE("records are ordered and carry the right fields for every kind") {
  for (auto kind : kAllKinds) {
    const ExperimentConfig c = small_config(kind);
    const ExperimentResult result = run_experiment(c);
    std::size_t per_trial = 1;
    if (kind == ExperimentKind::kMd0CoreVsK) per_trial = c.k_values.size();
    if (kind == ExperimentKind::kSwapCoreVsSteps) per_trial = c.checkpoints.size();
    REQUIRE(result.records.size() == c.d_values.size() * c.n_values.size() * c.trials * per_trial);
    std::size_t i = 0;
    for (double d : c.d_values) {
      for (std::size_t n : c.n_values) {
        for (std::size_t t = 0; t < c.trials; ++t) {
          for (std::size_t j = 0; j < per_trial; ++j, ++i) {
            const TrialRecord& r = result.records[i];
            REQUIRE(r.kind == kind);
            REQUIRE(r.d == d);
            REQUIRE(r.n == n);
            REQUIRE(r.trial_index == t);
            REQUIRE(r.trial_seed == trial_seed(c.master_seed, kind, d, n, t));
            if (r.oscillating_fraction) {
              REQUIRE(*r.oscillating_fraction >= 0.0);
              REQUIRE(*r.oscillating_fraction <= 1.0);
            }
          }
        }
      }
    }
    const bool oscillation = kind == ExperimentKind::kOscillationRegular || kind == ExperimentKind::kOscillationEr ||
                             kind == ExperimentKind::kCoreAfterMd;
    for (const auto& r : result.records) {
      CHECK(r.oscillating_fraction.has_value() == oscillation);
      CHECK(r.period.has_value() == oscillation);
      CHECK(r.reached_internal_cut.has_value() == (kind == ExperimentKind::kSwapInternalCut));
      CHECK(r.has_positive_core.has_value() ==
            (kind != ExperimentKind::kOscillationRegular && kind != ExperimentKind::kOscillationEr &&
             kind != ExperimentKind::kSwapInternalCut));
      CHECK_FALSE(r.cap_hit());
    }
    CHECK(result.census.has_value() == (kind == ExperimentKind::kMd0TypeCensus));
  }
}

TEST_CASE("workers do not change the output") {
  for (auto kind : kAllKinds) {
    ExperimentConfig c = small_config(kind);
    c.workers = 1;
    const auto serial = run_experiment(c);
    c.workers = 4;
    const auto parallel = run_experiment(c);
    CHECK(csv_of(serial.records) == csv_of(parallel.records));
    CHECK(serial.census == parallel.census);
  }
}

TEST_CASE("a trial can be recomputed from its seed alone") {
  ExperimentConfig c = small_config(ExperimentKind::kCoreAfterMd);
  const auto records = run_core_after_md(c);
  for (const auto& r : records) {
    const Graph g = trial_graph(r.kind, r.d, r.n, r.trial_seed);
    const LimitCycle cycle =
        run_to_limit_cycle(g, trial_initial_state(r.n, r.trial_seed), Dynamics::kMajority, default_max_steps(g));
    CHECK(r.steps_to_cycle == cycle.steps_to_cycle);
    CHECK(r.period == cycle.period);
    CHECK(r.oscillating_fraction == oscillating_fraction(cycle));
    CHECK(r.has_positive_core == has_positive_core(g, cycle.state_a));
  }

  ExperimentConfig s = small_config(ExperimentKind::kSwapInternalCut);
  for (const auto& r : run_swap_experiments(s)) {
    const Graph g = trial_graph(r.kind, r.d, r.n, r.trial_seed);
    Rng rng(trial_process_seed(r.trial_seed));
    const SwapResult swap = run_swap_process(g, trial_initial_state(r.n, r.trial_seed), rng);
    CHECK(r.swap_steps == swap.steps);
    CHECK(r.reached_internal_cut == is_internal_cut(g, swap.final_state));
    CHECK(*r.swap_steps <= g.num_edges());
  }
}

TEST_CASE("K4 oscillation trial is reproducible") {
  ExperimentConfig c;
  c.kind = ExperimentKind::kOscillationRegular;
  c.d_values = {3};
  c.n_values = {4};
  c.trials = 3;
  c.master_seed = 5;
  const auto a = run_oscillation_histogram(c);
  const auto b = run_oscillation_histogram(c);
  CHECK(a == b);
  CHECK(csv_of(a) == csv_of(b));
}

TEST_CASE("ER oscillation uses G(n, d/n)") {
  ExperimentConfig c = small_config(ExperimentKind::kOscillationEr);
  const auto records = run_oscillation_histogram(c);
  const Graph g = trial_graph(ExperimentKind::kOscillationEr, 2.5, 200, records.front().trial_seed);
  CHECK(g == gen_erdos_renyi(200, 2.5, derive_seed({records.front().trial_seed, 1})));
  CHECK_THROWS_AS(run_core_after_md(c), std::invalid_argument);
}

TEST_CASE("cap hits become flagged records") {
  ExperimentConfig c = small_config(ExperimentKind::kOscillationRegular);
  c.max_steps = 1;
  const auto result = run_experiment(c);
  CHECK(result.any_cap_hit());
  for (const auto& r : result.records) {
    if (!r.cap_hit()) continue;
    CHECK(r.steps_to_cycle == 1u);
    CHECK_FALSE(r.oscillating_fraction.has_value());
    CHECK(to_csv_row(r).find(",1,0,,,,,") != std::string::npos);
  }
}

TEST_CASE("swap checkpoints report the state after min(checkpoint, run length) swaps") {
  const ExperimentConfig c = small_config(ExperimentKind::kSwapCoreVsSteps);
  const auto records = run_swap_experiments(c);
  for (std::size_t i = 0; i < records.size(); i += 3) {
    const auto& r0 = records[i];
    CHECK(r0.k == 0u);
    CHECK(r0.swap_steps == 0u);
    CHECK(records[i + 1].k == StepCheckpoint::parse("0.2n").resolve(r0.n));
    CHECK(*records[i + 1].swap_steps <= *records[i + 1].k);
    CHECK(*records[i + 2].swap_steps >= *records[i + 1].swap_steps);

    const Graph g = trial_graph(r0.kind, r0.d, r0.n, r0.trial_seed);
    SwapProcess p(g, trial_initial_state(r0.n, r0.trial_seed));
    Rng rng(trial_process_seed(r0.trial_seed));
    p.run(rng, 150);
    CHECK(records[i + 2].swap_steps == p.steps());
    CHECK(records[i + 2].has_positive_core == has_positive_core(g, p.state()));
  }
}

TEST_CASE("md0 k=0 reduces to a core check on the starting state") {
  const ExperimentConfig c = small_config(ExperimentKind::kMd0CoreVsK);
  for (const auto& r : run_md0_core_vs_k(c)) {
    const Graph g = trial_graph(r.kind, r.d, r.n, r.trial_seed);
    const SpinState x = trial_initial_state(r.n, r.trial_seed);
    CHECK(r.has_positive_core == md0_core_probe(g, x, *r.k));
    if (r.k == 0u) CHECK(r.has_positive_core == has_positive_core(g, x));
  }
}

TEST_CASE("type census") {
  const Graph g = gen_random_regular(500, 5, 3);
  const TypeCensus unanimous = md0_type_census(g, SpinState(500, 1));
  REQUIRE(unanimous.size() == 243);
  CHECK(unanimous[242] == 500);
  CHECK(census_signature(242, 5) == "+++++");
  CHECK(census_signature(0, 5) == "-----");
  CHECK(census_signature(81, 5) == "0----");
  CHECK(census_signature(3 * 81 - 1 - 80, 5) == "+----");

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const SpinState x = SpinState::random(500, rng);
    const TypeCensus c = md0_type_census(g, x);
    CHECK(std::accumulate(c.begin(), c.end(), std::uint64_t{0}) == 500);
    for (std::size_t i = 81; i < 162; ++i) CHECK(c[i] == 0);  // x^0 = 0 is impossible

    // Recount directly from an explicit trajectory.
    std::vector<SpinState> traj{x};
    for (int t = 0; t < 4; ++t) traj.push_back(md0_step(g, traj.back()));
    TypeCensus expected(243, 0);
    for (Vertex v = 0; v < 500; ++v) {
      std::string sig;
      for (const auto& s : traj) sig += s[v] > 0 ? '+' : s[v] < 0 ? '-' : '0';
      std::size_t idx = 0;
      while (census_signature(idx, 5) != sig) ++idx;
      ++expected[idx];
    }
    CHECK(c == expected);
  }
  CHECK(md0_type_census(g, SpinState(500, -1), 2).size() == 27);
  CHECK_THROWS_AS(md0_type_census(g, SpinState(500, 0)), std::invalid_argument);

  std::ostringstream out;
  write_census_csv(out, md0_type_census(complete_graph(4), SpinState::parse("++++"), 1), 1);
  CHECK(out.str() == "signature,count\n--,0\n-0,0\n-+,0\n0-,0\n00,0\n0+,0\n+-,0\n+0,0\n++,4\n");
}

TEST_CASE("census experiment sums per-trial censuses") {
  const ExperimentConfig c = small_config(ExperimentKind::kMd0TypeCensus);
  const ExperimentResult r = run_md0_type_census(c);
  REQUIRE(r.census.has_value());
  CHECK(r.census_steps == 4);
  CHECK(std::accumulate(r.census->begin(), r.census->end(), std::uint64_t{0}) == c.trials * 300);
  for (const auto& rec : r.records) CHECK(rec.k == 4u);
}

TEST_CASE("CSV format") {
  CHECK(csv_header() ==
        "kind,d,n,trial_index,trial_seed,T_converge,period,oscillating_fraction,has_positive_core,"
        "reached_internal_cut,swap_steps,k");
  TrialRecord r;
  r.kind = ExperimentKind::kCoreAfterMd;
  r.d = 5;
  r.n = 10000;
  r.trial_index = 7;
  r.trial_seed = 123;
  r.steps_to_cycle = 12;
  r.period = 2;
  r.oscillating_fraction = 0.4987;
  r.has_positive_core = false;
  CHECK(to_csv_row(r) == "core-after-md,5,10000,7,123,12,2,0.4987,0,,,");
  r.oscillating_fraction = 1.0 / 3.0;
  CHECK(to_csv_row(r) == "core-after-md,5,10000,7,123,12,2,0.333333333,0,,,");

  TrialRecord er;
  er.kind = ExperimentKind::kOscillationEr;
  er.d = 2.5;
  er.n = 100;
  CHECK(to_csv_row(er).starts_with("oscillation-er,2.5,100,"));
}

TEST_CASE("Wilson score interval") {
  // Reference values from statsmodels proportion_confint(method="wilson").
  auto check = [](std::size_t k, std::size_t n, double lo, double hi) {
    const auto w = wilson_interval(k, n);
    CHECK(w.lower == doctest::Approx(lo).epsilon(1e-8));
    CHECK(w.upper == doctest::Approx(hi).epsilon(1e-8));
  };
  check(50, 100, 0.4038315304, 0.5961684696);
  check(90, 100, 0.8256343385, 0.9447708629);
  check(3, 10, 0.1077912674, 0.6032218525);
  CHECK(wilson_interval(0, 100).lower == doctest::Approx(0.0));
  CHECK(wilson_interval(0, 100).upper == doctest::Approx(0.0369934982).epsilon(1e-8));
  CHECK(wilson_interval(100, 100).upper == doctest::Approx(1.0));
  CHECK(wilson_interval(100, 100).lower == doctest::Approx(0.9630065018).epsilon(1e-8));
}

TEST_CASE("summaries group by point and k") {
  const ExperimentConfig c = small_config(ExperimentKind::kMd0CoreVsK);
  const auto records = run_md0_core_vs_k(c);
  const auto groups = summarize(records);
  REQUIRE(groups.size() == c.d_values.size() * c.n_values.size() * c.k_values.size());
  for (const auto& g : groups) {
    CHECK(g.trials == c.trials);
    CHECK(g.outcomes == c.trials);
    REQUIRE(g.probability.has_value());
    CHECK(*g.probability >= g.interval->lower);
    CHECK(*g.probability <= g.interval->upper);
    CHECK(format_summary(g).starts_with("md0-core-vs-k d="));
  }

  const auto osc = summarize(run_oscillation_histogram(small_config(ExperimentKind::kOscillationRegular)));
  for (const auto& g : osc) {
    CHECK_FALSE(g.probability.has_value());
    REQUIRE(g.mean_fraction.has_value());
    CHECK(*g.mean_fraction >= 0.0);
  }
}
