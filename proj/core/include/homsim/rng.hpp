#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace homsim {

/// Seeded random stream with hand-rolled variate transforms.
///
/// The engine (mt19937_64) and every transform below are fully pinned by
/// this code, so a given seed reproduces the same variate sequence on any
/// build of this library -- the replay contract for event generation.
/// A stream is single-owner: never share one instance across threads.
/// Splitmix64 finalizer of seed + (salt+1)*golden-gamma; the stated
/// derivation for every substream in the pipeline.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + (salt + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent substream `stream_id` of a run seed. Stream ids used by
  /// the acquisition pipeline: 0 = source, 1 = detector A, 2 = detector B.
  static RandomStream derive(std::uint64_t run_seed, std::uint64_t stream_id) {
    return RandomStream(derive_seed(run_seed, stream_id));
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Binomial(n, p) as n independent Bernoulli trials (n is tiny here).
  int binomial(int n, double p) {
    int k = 0;
    for (int i = 0; i < n; ++i) k += bernoulli(p) ? 1 : 0;
    return k;
  }

  /// Exponential with the given mean; inverse-CDF transform.
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  /// Standard normal via Box-Muller (two uniforms per draw, no caching).
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(kTau_ * u2);
  }

  /// Poisson(lambda) by Knuth's product-of-uniforms method.
  int poisson(double lambda) {
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  static constexpr double kTau_ = 6.283185307179586476925286766559;
  std::mt19937_64 engine_;
};

}  // namespace homsim
