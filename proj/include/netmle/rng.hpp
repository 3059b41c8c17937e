#pragma once

#include <cstdint>
#include <cmath>

namespace netmle {

// Counter-style generator: splitmix64 over an incrementing counter.
// Substreams are derived by hashing (seed, stream) so parallel replicates
// draw from disjoint, reproducible sequences on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // uniform in [0,1), 53-bit resolution
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) { return uniform() < prob; }

  // Beta(2,2) via Johnk's rejection: exact, uses only uniforms.
  double beta22() {
    for (;;) {
      double u = std::sqrt(uniform());
      double v = std::sqrt(uniform());
      if (u + v <= 1.0) return u / (u + v);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

// Inverse standard normal CDF (Acklam's rational approximation refined by
// one Halley step; absolute error well below 1e-9 on (0,1)).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace netmle
