#pragma once

#include <cstdint>
#include <span>

#include "lwlink/common.hpp"
#include "lwlink/permutation.hpp"

namespace lwlink::crypto {

// Duplex sponge over a PermutationSpec. One instance drives one AEAD or key
// derivation run; phases only ever move forward and any out-of-order call is
// rejected.
//
// Mode layout, fixed for this codebase:
//  - init:    state = key(128) || nonce(128) || zeros, then one permutation
//  - rate:    lowest 64 bits of the state
//  - AD:      per block, rate ^= block, flip top capacity bit, permute
//  - message: keystream = rate; rate ^= padded plaintext block; permute;
//             ciphertext = keystream ^ plaintext (emitted bytes only)
//  - tag:     flip top capacity bit, permute, then read the rate twice with
//             a permutation in between (128-bit tag)
//  - partial final blocks take 10* padding; block-aligned input is absorbed
//    as is
class DuplexSponge {
 public:
  enum class Phase { Init, AbsorbAd, AbsorbMsg, Squeeze, Finalized };

  DuplexSponge(const PermutationSpec& spec, const Block16& key,
               const Block16& nonce);

  void absorb_ad(std::span<const std::uint8_t> ad);
  Bytes encrypt(std::span<const std::uint8_t> msg);
  Bytes decrypt(std::span<const std::uint8_t> ct);

  // Tag path: domain-separated permutation, then squeeze 128 bits.
  Block16 finalize_tag();

  // Key-derivation path: squeeze the rate repeatedly with a permutation
  // between reads, skipping the finalization step entirely.
  Bytes squeeze_stream(std::size_t n_bytes);

  Phase phase() const { return phase_; }
  std::span<const std::uint8_t> state() const { return state_; }

 private:
  void require_phase_at_most(Phase p, const char* op);
  void toggle_domain_bit();
  void permute();
  Bytes process_blocks(std::span<const std::uint8_t> data, bool decrypting,
                       bool domain_flip_per_block);

  const PermutationSpec& spec_;
  Bytes state_;
  Phase phase_ = Phase::Init;
};

}  // namespace lwlink::crypto
