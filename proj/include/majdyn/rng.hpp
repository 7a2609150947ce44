#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace majdyn {

/// splitmix64 finalizer. Used to derive independent seeds from structured keys.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds a sequence of words into one seed; order-sensitive.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (auto w : words) h = mix64(h ^ mix64(w));
  return h;
}

/// Random source with platform-stable draws.
///
/// std::mt19937_64 output is fixed by the standard, but the std:: distributions
/// are not, so bounded integers and Bernoulli trials are derived here directly
/// from the raw 64-bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform ±1.
  std::int8_t spin() { return (engine_() >> 63) ? std::int8_t{1} : std::int8_t{-1}; }

 private:
  std::mt19937_64 engine_;
};

/// Bernoulli(p) by comparing a raw 64-bit draw against floor(p * 2^64).
/// p <= 0 never fires and p >= 1 always fires.
class BernoulliThreshold {
 public:
  explicit BernoulliThreshold(double p);

  bool operator()(Rng& rng) const {
    if (always_) return true;
    return rng.next() < threshold_;
  }

 private:
  std::uint64_t threshold_ = 0;
  bool always_ = false;
};

}  // namespace majdyn
