#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace proxvr {

// Counter-style splitmix64 generator. Chosen over <random> engines because
// every draw path here is fully specified, so streams are reproducible
// bit-for-bit across standard library implementations. Substreams derive
// statistically independent generators from (seed, key) without consuming
// state, which gives each (epoch, iteration) its own stream regardless of
// how many draws other iterations made.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed), state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; draws come in pairs, second is cached.
  double next_gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, n) by rejection, no modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: empty range");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Independent generator derived from this generator's seed and a key. Keyed
  // off the construction seed, not the current position, so a substream is the
  // same whether or not draws were made in between.
  SplitMix64 substream(std::uint64_t key) const {
    return SplitMix64(mix(seed_ ^ mix(key + 0x9E3779B97F4A7C15ull)));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Key for per-(epoch, iteration) substreams.
inline std::uint64_t stream_key(std::uint64_t a, std::uint64_t b) {
  return SplitMix64::mix(a * 0xD1B54A32D192ED03ull + b + 0x8BB84B93962EACC9ull);
}

}  // namespace proxvr
