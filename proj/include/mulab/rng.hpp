#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace mulab {

/// Counter-based deterministic generator built on the SplitMix64 output
/// function. Every draw is a pure function of (seed, stream, counter), so
/// streams can be replayed or split freely and identical seeds reproduce
/// identical byte streams on any platform with IEEE doubles.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)))), counter_(0) {}

  std::uint64_t next_u64() { return mix(base_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  /// Uniform in [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller (consumes two uniforms).
  double normal() {
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0x1.0p-60) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Flat Dirichlet sample of length n (normalized exponentials).
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> a(n);
    double s = 0.0;
    for (auto& v : a) {
      double u = uniform();
      while (u <= 0x1.0p-60) u = uniform();
      v = -std::log(u);
      s += v;
    }
    for (auto& v : a) v /= s;
    return a;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t counter_;
};

}  // namespace mulab
