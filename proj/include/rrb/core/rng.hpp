#pragma once

#include <cstdint>
#include <random>

namespace rrb {

/// Seeded random stream with deterministic child-stream derivation.
///
/// A child stream depends only on the parent's seed and the key, never on how
/// many values the parent has already produced. Per-arm or per-round streams
/// derived this way give results that do not depend on evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  [[nodiscard]] Rng child(std::uint64_t key) const {
    return Rng(mix(seed_ ^ mix(key + 0x9e3779b97f4a7c15ULL)));
  }

  std::mt19937_64& engine() { return engine_; }

  /// Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  /// +1 or -1 with equal probability.
  int rademacher() { return (engine_() >> 63) ? 1 : -1; }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t binomial(std::uint64_t trials, double p) {
    if (trials == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    return std::binomial_distribution<std::uint64_t>(trials, p)(engine_);
  }

  /// splitmix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace rrb
