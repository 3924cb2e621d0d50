#pragma once

#include <cstdint>

namespace qdsim {

/// Deterministic RNG built from splitmix64 + xoshiro256**.
///
/// The standard-library distributions are implementation defined, so all
/// sampling here uses fixed bit-level algorithms. Identical seeds give
/// identical streams on every platform, which the reproducibility
/// guarantees of the experiment runner rely on.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    // splitmix64 expansion of the seed into the xoshiro state.
    uint64_t x = seed;
    for (auto& word : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  /// Per-trial generator: counter-based derivation from a master seed.
  /// rng(trial) = Rng(splitmix64(master) xor golden*index), so any trial
  /// can be reproduced in isolation and results do not depend on how
  /// trials are distributed over workers.
  static Rng derive(uint64_t master_seed, uint64_t index) {
    uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= (z >> 31);
    return Rng(z ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  uint64_t next_u64() {
    auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0,1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). Rejection sampling, unbiased.
  int uniform_int(int bound) {
    const uint64_t b = static_cast<uint64_t>(bound);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<int>(v % b);
  }

 private:
  uint64_t s_[4];
};

}  // namespace qdsim
