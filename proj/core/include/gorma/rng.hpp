// Counter-addressed random streams.
//
// Every (seed, node, period) triple maps to its own generator state, so the
// draws a node makes in a period do not depend on how periods are scheduled
// across threads or in which order nodes are visited.

#pragma once

#include <cstdint>
#include <limits>

namespace gorma::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Generator for one node in one period of a run.
inline Xoshiro256 substream(std::uint64_t seed, std::uint64_t node_id, std::uint64_t period_index) {
  std::uint64_t h = seed;
  std::uint64_t key = splitmix64(h);
  h = key ^ (node_id * 0xD1B54A32D192ED03ULL);
  key = splitmix64(h);
  h = key ^ (period_index * 0xAEF17502108EF2D9ULL);
  return Xoshiro256(splitmix64(h));
}

}  // namespace gorma::rng
