#pragma once
// Deterministic random source. Wraps mt19937_64 with hand-rolled draws so a
// (config, seed) pair replays bit-identically regardless of standard-library
// distribution internals.

#include <cstdint>
#include <random>

namespace repsim {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform double in [0, 1), 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  double uniform(double low, double high) {
    return low + (high - low) * unit();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace repsim
