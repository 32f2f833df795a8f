#pragma once

#include <cstdint>
#include <random>

#include "alasso/normal.hpp"

namespace alasso {

// Seeded RNG helpers.  All draws go through mt19937_64 raw output plus our
// own transforms (never std::*_distribution, whose output is
// implementation-defined), so a given seed reproduces the same stream on
// every platform.

/// splitmix64 step; used to derive independent sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for sub-stream `index` of a master seed (replications, folds, ...).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL + index * 0xbf58476d1ce4e5b9ULL);
  splitmix64(s);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on the open interval (0, 1).
  double uniform01() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal via the inverse cdf.
  double normal() { return phi_quantile(uniform01()); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return gen_() % bound; }

  /// Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace alasso
