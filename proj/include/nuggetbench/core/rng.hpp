#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nuggetbench/core/error.hpp"

namespace nb {

// Deterministic RNG. mt19937_64 is fully specified by the standard; the
// value mappings below are explicit so streams are identical across
// compilers and standard libraries (std::uniform_* distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform in [0, n) without modulo bias.
  std::size_t uniform_index(std::size_t n);

  // Uniform in [lo, hi] inclusive.
  std::size_t uniform_range(std::size_t lo, std::size_t hi) {
    return lo + uniform_index(hi - lo + 1);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Index drawn proportionally to non-negative weights.
  std::size_t pick_weighted(std::span<const double> weights);

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.empty()) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = uniform_index(i + 1);
      std::swap(v[i], v[j]);
    }
  }

  // Independent child stream (for per-run substreams).
  Rng fork() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace nb
