#pragma once

#include <cstdint>

namespace bayup {

// Counter-friendly deterministic random stream (splitmix64 core).
// Streams derived via trial_stream(seed, i) are independent of each other
// and of the order in which trials execute, so parallel schedules cannot
// change results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed + golden)) {}

  static Rng trial_stream(std::uint64_t seed, std::uint64_t trial) {
    Rng r(0);
    r.state_ = mix(mix(seed + golden) + (trial + 1) * golden);
    return r;
  }

  std::uint64_t next_u64() {
    state_ += golden;
    return mix(state_);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // standard normal, Box-Muller with cached spare
  double normal();

 private:
  static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bayup
