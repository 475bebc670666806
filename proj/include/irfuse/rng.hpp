#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace irfuse::num {

// Seeded PRNG with platform-independent output.
//
// The raw 64-bit stream is std::mt19937_64, whose sequence is fixed by the
// C++ standard. All value mappings (doubles, bounded ints) are implemented
// here rather than with std::*_distribution, so identical seeds give
// identical draws on every platform and standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1): top 53 bits of the raw draw.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in {0, ..., n-1} via 128-bit multiply (Lemire's unbiased-enough
  // fixed mapping; bias is < n / 2^64 and the mapping is deterministic).
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Derive an independent, reproducible stream for a named component.
  Rng fork(std::string_view tag) const;

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace irfuse::num
