#pragma once
// Counter-based deterministic generator (SplitMix64 finalizer over a
// keyed counter). Streams derived from (seed, stream) are independent, so
// per-trial randomness cannot be reordered by concurrency. Identical
// (seed, stream) produces identical output on every platform.

#include <cstdint>

namespace cosetlab {

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix(stream))) {}

  std::uint64_t next_u64() {
    return mix(key_ + (++ctr_) * 0x9E3779B97F4A7C15ULL);
  }

  // uniform in [0, 1), 53 random bits
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in [0, bound); bound >= 1
  std::uint32_t next_below(std::uint32_t bound) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * bound;
    return static_cast<std::uint32_t>(wide >> 64);
  }

  // Bernoulli(p)
  bool next_bernoulli(double p) { return next_double() < p; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace cosetlab
