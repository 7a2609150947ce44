#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "majdyn/graph.hpp"

namespace majdyn {

enum class RegularSampler {
  /// Pairing with restart for d <= kMaxRestartDegree, sequential pairing above.
  kAuto,
  /// Configuration model: all n*d stubs are paired uniformly at random and the
  /// whole pairing is discarded as soon as it produces a loop or a repeated
  /// edge. Exactly uniform over simple d-regular graphs, but the expected
  /// number of attempts grows like exp((d*d - 1) / 4).
  kPairingWithRestart,
  /// Steger-Wormald: pairs are drawn one at a time among admissible stub
  /// pairs, restarting only on a dead end. Asymptotically uniform.
  kSequentialPairing,
};

/// Largest d for which kAuto uses the exactly uniform restart sampler.
inline constexpr std::size_t kMaxRestartDegree = 6;

/// Random simple d-regular graph on n vertices. The output is a pure
/// function of (n, d, seed, sampler).
///
/// Throws std::invalid_argument when n*d is odd, d >= n, or n == 0.
Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                         RegularSampler sampler = RegularSampler::kAuto);

/// Erdős–Rényi G(n, d/n): each of the n(n-1)/2 pairs, visited in
/// lexicographic order, is kept after one Bernoulli(d/n) draw.
///
/// Throws std::invalid_argument unless 0 <= d <= n.
Graph gen_erdos_renyi(std::size_t n, double d, std::uint64_t seed);

// Fixed-numbering small graphs.
Graph complete_graph(std::size_t k);           // vertices 0..k-1, all pairs
Graph complete_bipartite_3_3();                // parts {0,1,2} and {3,4,5}
Graph cycle_graph(std::size_t k);              // edges (i, i+1 mod k), k >= 3
Graph path_graph(std::size_t k);               // edges (i, i+1), k >= 1

/// Parses "K4", "K33", "cycle(k)", "complete(k)" or "path(k)".
/// Throws std::invalid_argument for unknown names or bad parameters.
Graph named_graph(std::string_view name);

}  // namespace majdyn
