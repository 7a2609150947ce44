// Command-line front end: graph generation, single runs, and experiment sweeps.

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "majdyn/cores.hpp"
#include "majdyn/dynamics.hpp"
#include "majdyn/experiments.hpp"
#include "majdyn/graph.hpp"
#include "majdyn/graphgen.hpp"

namespace {

using namespace majdyn;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitCapHit = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) throw UsageError("empty item in list '" + text + "'");
    items.push_back(item);
  }
  if (items.empty()) throw UsageError("empty list");
  return items;
}

template <typename T>
T parse_number(const std::string& text, const char* flag) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(std::string("invalid value '") + text + "' for " + flag);
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<T>(item, flag));
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  return out;
}

struct GenRegularArgs {
  std::size_t n = 0, d = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct GenErArgs {
  std::size_t n = 0;
  double d = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct RunArgs {
  std::string graph;
  std::string dynamics = "md";
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_steps;
  std::optional<std::size_t> k;
  std::string dump;
  std::string out;
};

struct ExperimentArgs {
  std::string kind;
  std::string d;
  std::string n;
  std::size_t trials = 100;
  std::string k;
  std::string checkpoints;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_steps;
  unsigned workers = 0;
  std::string out;
  std::string census_out;
};

int gen_regular(const GenRegularArgs& a) {
  const Graph g = gen_random_regular(a.n, a.d, a.seed);
  write_edge_list(g, std::filesystem::path(a.out));
  std::cout << "wrote " << a.d << "-regular graph n=" << g.num_vertices() << " m=" << g.num_edges() << " to "
            << a.out << '\n';
  return kExitOk;
}

int gen_er(const GenErArgs& a) {
  const Graph g = gen_erdos_renyi(a.n, a.d, a.seed);
  write_edge_list(g, std::filesystem::path(a.out));
  std::cout << "wrote G(n, d/n) graph n=" << g.num_vertices() << " d=" << a.d << " m=" << g.num_edges() << " to "
            << a.out << '\n';
  return kExitOk;
}

int run(const RunArgs& a) {
  const Graph g = read_edge_list(std::filesystem::path(a.graph));
  Rng rng(a.seed);
  const SpinState initial = SpinState::random(g.num_vertices(), rng);

  std::unique_ptr<std::ofstream> dump;
  if (!a.dump.empty()) dump = std::make_unique<std::ofstream>(open_output(a.dump));
  auto observe = [&](std::size_t t, const SpinState& x) {
    if (dump) *dump << trajectory_line(t, x) << '\n';
  };
  const bool regular = g.regular_degree().has_value();
  auto core_note = [&](const SpinState& x) -> std::string {
    if (!regular) return "";
    return std::string(" positive_core=") + (has_positive_core(g, neutral_to_negative(x)) ? "1" : "0");
  };

  if (a.dynamics == "swap") {
    // The swap process draws from a stream separate from the initial state.
    Rng swap_rng(derive_seed({a.seed, 3}));
    SwapProcess process(g, initial);
    observe(0, process.state());
    while (process.step(swap_rng)) observe(process.steps(), process.state());
    if (!a.out.empty()) open_output(a.out) << process.state().to_string() << '\n';
    std::cout << "dynamics=swap n=" << g.num_vertices() << " m=" << g.num_edges() << " steps=" << process.steps()
              << " cut_size=" << process.cut_size()
              << " internal_cut=" << (is_internal_cut(g, process.state()) ? 1 : 0) << core_note(process.state())
              << '\n';
    return kExitOk;
  }

  const Dynamics dynamics = a.dynamics == "md" ? Dynamics::kMajority : Dynamics::kMajorityWithZeros;
  if (a.k) {
    if (dynamics != Dynamics::kMajorityWithZeros) throw UsageError("--k applies to --dynamics md0 only");
    SpinState x = initial;
    observe(0, x);
    for (std::size_t t = 1; t <= *a.k; ++t) {
      x = md0_step(g, x);
      observe(t, x);
    }
    if (!a.out.empty()) open_output(a.out) << x.to_string() << '\n';
    std::cout << "dynamics=md0 n=" << g.num_vertices() << " m=" << g.num_edges() << " k=" << *a.k
              << " positive=" << x.count(1) << " neutral=" << x.count(0) << " negative=" << x.count(-1)
              << core_note(x) << '\n';
    return kExitOk;
  }

  const std::size_t cap = a.max_steps.value_or(default_max_steps(g));
  try {
    const LimitCycle cycle = run_to_limit_cycle(g, initial, dynamics, cap, observe);
    if (!a.out.empty()) {
      auto out = open_output(a.out);
      out << cycle.state_a.to_string() << '\n' << cycle.state_b.to_string() << '\n';
    }
    std::cout << "dynamics=" << to_string(dynamics) << " n=" << g.num_vertices() << " m=" << g.num_edges()
              << " period=" << cycle.period << " T=" << cycle.steps_to_cycle
              << " oscillating_fraction=" << oscillating_fraction(cycle)
              << (cycle.state_a.has_zeros() ? std::string() : core_note(cycle.state_a)) << '\n';
    return kExitOk;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapHit;
  }
}

int experiment(const ExperimentArgs& a) {
  ExperimentConfig config;
  const auto kind = parse_experiment_kind(a.kind);
  if (!kind) throw UsageError("unknown experiment kind '" + a.kind + "'");
  config.kind = *kind;
  config.d_values = parse_list<double>(a.d, "--d");
  for (const auto& n : split_list(a.n)) {
    // Accept scientific shorthand such as 1e4 as long as it is integral.
    const auto value = parse_number<double>(n, "--n");
    if (value < 1 || value != static_cast<double>(static_cast<std::size_t>(value))) {
      throw UsageError("--n values must be positive integers");
    }
    config.n_values.push_back(static_cast<std::size_t>(value));
  }
  config.trials = a.trials;
  if (!a.k.empty()) config.k_values = parse_list<std::size_t>(a.k, "--k");
  if (!a.checkpoints.empty()) {
    for (const auto& c : split_list(a.checkpoints)) config.checkpoints.push_back(StepCheckpoint::parse(c));
  }
  config.master_seed = a.seed;
  config.max_steps = a.max_steps;
  config.workers = a.workers;
  config.validate();

  const ExperimentResult result = run_experiment(config);
  {
    auto out = open_output(a.out);
    write_csv(out, result.records);
  }
  std::string census_path;
  if (result.census) {
    census_path = a.census_out.empty() ? std::filesystem::path(a.out).replace_extension(".census.csv").string()
                                       : a.census_out;
    auto out = open_output(census_path);
    write_census_csv(out, *result.census, result.census_steps);
  }
  for (const auto& s : summarize(result.records)) std::cerr << format_summary(s) << '\n';
  std::cout << "experiment=" << a.kind << " records=" << result.records.size() << " out=" << a.out;
  if (!census_path.empty()) std::cout << " census=" << census_path;
  if (result.any_cap_hit()) std::cout << " cap_hits=yes";
  std::cout << '\n';
  return result.any_cap_hit() ? kExitCapHit : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majority dynamics, MD0 and the swap process on random graphs"};
  app.require_subcommand(1);

  GenRegularArgs reg;
  auto* gen_reg = app.add_subcommand("gen-regular", "Sample a random d-regular graph and write it as an edge list");
  gen_reg->add_option("--n", reg.n, "Number of vertices")->required();
  gen_reg->add_option("--d", reg.d, "Degree; n*d must be even and d < n")->required();
  gen_reg->add_option("--seed", reg.seed, "Random seed")->required();
  gen_reg->add_option("--out", reg.out, "Output edge-list path")->required();

  GenErArgs er;
  auto* gen_er_cmd = app.add_subcommand("gen-er", "Sample G(n, d/n) and write it as an edge list");
  gen_er_cmd->add_option("--n", er.n, "Number of vertices")->required();
  gen_er_cmd->add_option("--d", er.d, "Average degree, 0 <= d <= n")->required();
  gen_er_cmd->add_option("--seed", er.seed, "Random seed")->required();
  gen_er_cmd->add_option("--out", er.out, "Output edge-list path")->required();

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Run one trajectory from a uniformly random ±1 start");
  run_cmd->add_option("--graph", ra.graph, "Input edge-list path")->required();
  run_cmd->add_option("--dynamics", ra.dynamics, "md, md0 or swap")
      ->check(CLI::IsMember({"md", "md0", "swap"}))
      ->capture_default_str();
  run_cmd->add_option("--seed", ra.seed, "Random seed for the initial state and swap choices")->required();
  run_cmd->add_option("--max-steps", ra.max_steps, "Step cap for md/md0 (default 10*m + 100)");
  run_cmd->add_option("--k", ra.k, "md0 only: run exactly k steps instead of seeking a limit cycle");
  run_cmd->add_option("--dump-trajectory", ra.dump, "Write 'step <t> <states>' lines to this path");
  run_cmd->add_option("--out", ra.out, "Write the final state (both limit states for md/md0) to this path");

  ExperimentArgs ea;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a seeded Monte-Carlo sweep and write per-trial CSV");
  exp_cmd->add_option("--kind", ea.kind,
                      "oscillation-regular, oscillation-er, core-after-md, swap-internal-cut, "
                      "swap-core-vs-steps, md0-core-vs-k or md0-type-census")
      ->required();
  exp_cmd->add_option("--d", ea.d, "Comma-separated degrees (average degree for oscillation-er)")->required();
  exp_cmd->add_option("--n", ea.n, "Comma-separated vertex counts")->required();
  exp_cmd->add_option("--trials", ea.trials, "Trials per (d, n) point")->capture_default_str();
  exp_cmd->add_option("--k", ea.k, "Comma-separated MD0 step counts (md0 kinds; census default 4)");
  exp_cmd->add_option("--checkpoints", ea.checkpoints,
                      "Comma-separated swap-step checkpoints, absolute (2500) or relative to n (0.25n)");
  exp_cmd->add_option("--seed", ea.seed, "Master seed")->required();
  exp_cmd->add_option("--max-steps", ea.max_steps, "MD step cap per trial (default 10*m + 100)");
  exp_cmd->add_option("--workers", ea.workers, "Worker threads (0: all hardware threads)")->capture_default_str();
  exp_cmd->add_option("--out", ea.out, "Per-trial CSV output path")->required();
  exp_cmd->add_option("--census-out", ea.census_out, "Census CSV path (default <out>.census.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*gen_reg) return gen_regular(reg);
    if (*gen_er_cmd) return gen_er(er);
    if (*run_cmd) return run(ra);
    if (*exp_cmd) return experiment(ea);
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapHit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
