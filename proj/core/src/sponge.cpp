#include "lwlink/sponge.hpp"

#include <algorithm>

#include "lwlink/errors.hpp"

namespace lwlink::crypto {

DuplexSponge::DuplexSponge(const PermutationSpec& spec, const Block16& key,
                           const Block16& nonce)
    : spec_(spec), state_(spec.state_bytes(), 0) {
  if (spec.rate_bits != 64) {
    fail(Errc::unsupported_width, "duplex sponge requires a 64-bit rate");
  }
  std::copy(key.begin(), key.end(), state_.begin());
  std::copy(nonce.begin(), nonce.end(), state_.begin() + 16);
  permute();
}

void DuplexSponge::require_phase_at_most(Phase p, const char* op) {
  if (static_cast<int>(phase_) > static_cast<int>(p)) {
    fail(Errc::phase_violation,
         std::string(op) + " called after the sponge moved past that phase");
  }
}

void DuplexSponge::toggle_domain_bit() {
  const unsigned top = spec_.state_bits - 1;
  state_[top / 8] ^= static_cast<std::uint8_t>(1u << (top % 8));
}

void DuplexSponge::permute() { spec_.permute(state_); }

// Shared duplex block loop. Absorption (`decrypting == false` with discarded
// output) xors padded input into the rate; decryption recovers plaintext from
// the rate before updating it, so both directions leave identical states.
Bytes DuplexSponge::process_blocks(std::span<const std::uint8_t> data,
                                   bool decrypting,
                                   bool domain_flip_per_block) {
  const std::size_t rate = spec_.rate_bytes();
  Bytes out;
  out.reserve(data.size());
  std::size_t off = 0;
  while (off < data.size()) {
    const std::size_t take = std::min(rate, data.size() - off);
    std::uint8_t block[8] = {0};
    std::copy(data.begin() + off, data.begin() + off + take, block);
    if (take < rate) block[take] = 0x01;  // 10* padding
    if (decrypting) {
      // plaintext = rate ^ ciphertext for the carried bytes, then rebuild
      // the padded plaintext block for the state update.
      std::uint8_t plain[8] = {0};
      for (std::size_t j = 0; j < take; ++j) plain[j] = state_[j] ^ block[j];
      if (take < rate) plain[take] = 0x01;
      for (std::size_t j = 0; j < rate; ++j) state_[j] ^= plain[j];
      out.insert(out.end(), plain, plain + take);
    } else {
      for (std::size_t j = 0; j < rate; ++j) state_[j] ^= block[j];
      out.insert(out.end(), state_.begin(), state_.begin() + take);
    }
    if (domain_flip_per_block) toggle_domain_bit();
    permute();
    off += take;
  }
  return out;
}

void DuplexSponge::absorb_ad(std::span<const std::uint8_t> ad) {
  require_phase_at_most(Phase::AbsorbAd, "absorb_ad");
  phase_ = Phase::AbsorbAd;
  process_blocks(ad, /*decrypting=*/false, /*domain_flip_per_block=*/true);
}

Bytes DuplexSponge::encrypt(std::span<const std::uint8_t> msg) {
  require_phase_at_most(Phase::AbsorbMsg, "encrypt");
  phase_ = Phase::AbsorbMsg;
  return process_blocks(msg, false, false);
}

Bytes DuplexSponge::decrypt(std::span<const std::uint8_t> ct) {
  require_phase_at_most(Phase::AbsorbMsg, "decrypt");
  phase_ = Phase::AbsorbMsg;
  return process_blocks(ct, true, false);
}

Block16 DuplexSponge::finalize_tag() {
  require_phase_at_most(Phase::Squeeze, "finalize_tag");
  if (phase_ == Phase::Squeeze) {
    fail(Errc::phase_violation, "finalize_tag after stream squeezing");
  }
  toggle_domain_bit();
  permute();
  Block16 tag{};
  const std::size_t rate = spec_.rate_bytes();
  std::copy(state_.begin(), state_.begin() + rate, tag.begin());
  permute();
  std::copy(state_.begin(), state_.begin() + rate, tag.begin() + rate);
  phase_ = Phase::Finalized;
  return tag;
}

Bytes DuplexSponge::squeeze_stream(std::size_t n_bytes) {
  require_phase_at_most(Phase::Squeeze, "squeeze_stream");
  phase_ = Phase::Squeeze;
  const std::size_t rate = spec_.rate_bytes();
  Bytes out;
  out.reserve(n_bytes);
  while (out.size() < n_bytes) {
    const std::size_t take = std::min(rate, n_bytes - out.size());
    out.insert(out.end(), state_.begin(), state_.begin() + take);
    if (out.size() < n_bytes) permute();
  }
  // Keep the state fresh for a possible further squeeze.
  permute();
  return out;
}

}  // namespace lwlink::crypto
