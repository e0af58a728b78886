#pragma once

#include <cstdint>

namespace dlpkit {

// splitmix64; pinned so seeded runs are identical on every platform.
struct Rng {
  std::uint64_t state = 0;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

}  // namespace dlpkit
