#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "lwlink/common.hpp"
#include "lwlink/permutation.hpp"

namespace lwlink::crypto {

// Declared block budget for one AEAD call. l_ad/l_msg count 64-bit blocks;
// actual inputs may be shorter and are padded per the duplex rules.
struct AeadParams {
  std::uint64_t l_ad_blocks = 0;
  std::uint64_t l_msg_blocks = 0;
  Block16 key{};
  Block16 nonce{};
  unsigned tag_bits = 128;
};

// KCK || KEK || TK, in that order, exactly the 384-bit derivation output.
struct SessionKeys {
  Block16 kck{};
  Block16 kek{};
  Block16 tk{};

  bool operator==(const SessionKeys&) const = default;
};

std::pair<Bytes, Block16> aead_encrypt(const AeadParams& params,
                                       std::span<const std::uint8_t> ad,
                                       std::span<const std::uint8_t> msg,
                                       const PermutationSpec& spec);

// Returns the plaintext only when the recomputed tag matches (compared in
// constant time); nullopt on authentication failure.
std::optional<Bytes> aead_decrypt(const AeadParams& params,
                                  std::span<const std::uint8_t> ad,
                                  std::span<const std::uint8_t> ct,
                                  const Block16& tag,
                                  const PermutationSpec& spec);

// Session key derivation. Runs the duplex in encryption mode with no
// associated data, keyed by the master key, with the nonce built from the
// trailing 64 bits of each party nonce; the two MAC addresses form the
// absorbed message. Squeezes 3 x 128 bits and splits them KCK || KEK || TK.
SessionKeys kdf(const Block16& pmk, const Block16& anonce,
                const Block16& snonce, const MacAddr& ap_mac,
                const MacAddr& sta_mac, const PermutationSpec& spec);

// Frame integrity tag: tag-only AEAD call (four AD blocks, no message) whose
// AD carries nonce || replay_counter under the confirmation key.
Block16 mic(const Block16& kck, const Block16& nonce,
            const Block16& replay_counter, const PermutationSpec& spec);

bool constant_time_equal(std::span<const std::uint8_t> a,
                         std::span<const std::uint8_t> b);

}  // namespace lwlink::crypto
