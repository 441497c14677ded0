#pragma once

#include <cstdint>

namespace renpost {

// Deterministic, splittable random streams.
//
// Derivation rule (documented contract, relied on for reproducibility):
// every stream carries the 64-bit key it was created from; a child stream
// for index i has key
//
//   child_key = sm64(sm64(parent_key) ^ (0x9E3779B97F4A7C15 * (i + 1)))
//
// where sm64 is the SplitMix64 finalizer. Generation state is xoshiro256**
// seeded from the key via SplitMix64. Replication i of an experiment always
// sees the same stream no matter how replications are scheduled.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t sm64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {
    std::uint64_t s = key;
    for (auto& word : state_) word = sm64(s++);
  }

  std::uint64_t key() const { return key_; }

  RngStream substream(std::uint64_t index) const {
    return RngStream(sm64(sm64(key_) ^ (kGolden * (index + 1))));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Open interval (0,1), 53-bit resolution. Never returns 0 or 1, so it is
  // safe to feed through logs and quantile functions.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via the inverse cdf (see special.hpp); implemented in
  // special.cpp to keep this header light.
  double normal();

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t key_;
  std::uint64_t state_[4];
};

}  // namespace renpost
