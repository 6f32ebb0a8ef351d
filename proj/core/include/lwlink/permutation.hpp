#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "lwlink/common.hpp"

namespace lwlink::crypto {

// A pluggable fixed-width permutation plus the sponge geometry built on it.
// Real cipher-suite round functions can be slotted in through `permute`; the
// built-in reference round function below is what every suite ships with and
// what all tests pin down.
struct PermutationSpec {
  std::string name;
  unsigned state_bits = 256;
  unsigned rate_bits = 64;
  unsigned rounds = 12;
  unsigned data_limit_log2 = 60;  // processed data must stay below 2^d bits
  std::function<void(std::span<std::uint8_t>)> permute;

  std::size_t state_bytes() const { return (state_bits + 7) / 8; }
  std::size_t rate_bytes() const { return rate_bits / 8; }

  static const PermutationSpec& for_scheme(Scheme s);
};

// Reference round function, normative for this codebase.
//
// The state is viewed as ceil(width/64) little-endian lanes; the final lane
// is truncated to the residual width and both rotations and round constants
// stay inside that width. Twelve rounds; round j updates lanes in place, in
// ascending index order:
//
//   lane[i] = rotl(lane[i], (7*i + j) mod w_i)
//             ^ lane[(i+1) mod n]
//             ^ repeat_byte((17*j + 29*i + 1) mod 256) masked to w_i bits
//
// In-place sequential update makes every step trivially invertible, so the
// whole map is a bijection on the state space.
void reference_permutation_in_place(std::span<std::uint8_t> state,
                                    unsigned state_bits);

// Pure convenience wrapper. Width must be one of {256, 259, 320}.
Bytes reference_permutation(std::span<const std::uint8_t> state,
                            unsigned state_bits);

}  // namespace lwlink::crypto
