#pragma once

#include <cstdint>

namespace poolshare {

// SplitMix64. Chosen over std:: engines because the output stream must be
// identical on every platform; this is the generator recorded as "splitmix64"
// in run metadata. Counter-based: one 64-bit state word, trivially seedable.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, bound); bound > 0. Rejection sampling keeps it unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  bool next_bool() { return next() >> 63; }
};

}  // namespace poolshare
