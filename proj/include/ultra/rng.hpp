#pragma once

#include <cstdint>
#include <random>

namespace ultra {

// std::mt19937_64 is bit-specified by the standard, but the standard
// distributions are not, so draws are derived from raw engine output here.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t index(std::uint64_t n) {
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t skip = (0 - n) % n;
    std::uint64_t x = engine_();
    while (x < skip) x = engine_();
    return x % n;
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

/// Seed of the independent stream used for repeat `t` of a sampled estimate.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t t) { return seed + t; }

}  // namespace ultra
