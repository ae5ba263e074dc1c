#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace lanefree {

/// Quantile of the standard normal (Acklam's rational approximation refined by
/// one Halley step). Stable across platforms, one uniform per normal draw.
double normal_quantile(double p);

/// Deterministic random stream. All stochastic code in the project draws
/// through this wrapper so results are reproducible bit-for-bit for a seed
/// regardless of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return (engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  double normal(double mu, double sigma) {
    double u = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    return mu + sigma * normal_quantile(u);
  }

  /// Truncated normal via inverse-CDF on the restricted quantile range.
  double truncated_normal(double mu, double sigma, double lo, double hi);

  double exponential(double rate) {
    if (rate <= 0.0) throw std::invalid_argument("exponential rate must be > 0");
    double u = uniform();
    if (u >= 1.0) u = 1.0 - 0x1.0p-53;
    return -std::log1p(-u) / rate;
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Derives an independent child seed; used to give sweep points and
  /// approaches their own streams deterministically.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lanefree
