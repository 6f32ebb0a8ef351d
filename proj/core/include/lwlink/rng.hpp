#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "lwlink/common.hpp"

namespace lwlink {

// All randomness in the simulator flows through these deterministic,
// explicitly seeded generators. No code path touches system entropy, so any
// scenario replays bit-identically from its seed set.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// xoshiro256** - used for nonce generation and payload material.
class Xoshiro256 {
 public:
  static Xoshiro256 seeded(std::uint64_t seed);
  static Xoshiro256 from_bytes(const Seed256& seed);

  std::uint64_t next();
  double unit();  // [0, 1)
  Block16 next_block16();
  void fill(std::span<std::uint8_t> out);

 private:
  std::array<std::uint64_t, 4> s_{};
};

// Counter-based uniform in (0, 1): stateless, parallel-safe.
double counter_unit(std::uint64_t seed, std::uint64_t counter);

// One standard-normal pair per counter value (Box-Muller).
std::pair<double, double> counter_gaussian_pair(std::uint64_t seed,
                                                std::uint64_t counter);

// Expands a 64-bit master seed into an independent 256-bit stream seed.
Seed256 derive_seed(std::uint64_t master, std::uint64_t tag);

}  // namespace lwlink
