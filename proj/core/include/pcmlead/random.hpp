#pragma once

// Reproducible random streams for the simulation harness.
//
// Each stream is a std::mt19937_64 (whose output sequence is fixed by the
// standard) seeded with a 64-bit key. Keys are derived from the experiment
// seed and the coordinates of a trial by folding every component through the
// SplitMix64 finalizer, so a trial's draws do not depend on which thread runs
// it or in what order. Doubles are built from the top 53 bits of one engine
// output; std::uniform_real_distribution is avoided because its algorithm is
// implementation-defined.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pcmlead {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Order-sensitive hash of (seed, parts...).
std::uint64_t derive_key(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> parts) noexcept;

class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key) : engine_(key) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;

 private:
  std::mt19937_64 engine_;
};

}  // namespace pcmlead
