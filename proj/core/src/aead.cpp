#include "lwlink/aead.hpp"

#include <algorithm>

#include "lwlink/errors.hpp"
#include "lwlink/sponge.hpp"

namespace lwlink::crypto {

namespace {

void check_budget(const AeadParams& params, std::size_t ad_len,
                  std::size_t msg_len, const PermutationSpec& spec) {
  if (ad_len > 8ull * params.l_ad_blocks) {
    fail(Errc::oversize_input, "associated data exceeds declared blocks");
  }
  if (msg_len > 8ull * params.l_msg_blocks) {
    fail(Errc::oversize_input, "message exceeds declared blocks");
  }
  if (params.tag_bits != 128) {
    fail(Errc::oversize_input, "tag size is fixed at 128 bits");
  }
  const unsigned d = spec.data_limit_log2;
  if (d < 64) {
    const unsigned __int128 bits =
        (static_cast<unsigned __int128>(params.l_ad_blocks) +
         params.l_msg_blocks) *
        64;
    if (bits >= (static_cast<unsigned __int128>(1) << d)) {
      fail(Errc::data_limit_exceeded,
           "declared blocks exceed the per-key data budget");
    }
  }
}

}  // namespace

bool constant_time_equal(std::span<const std::uint8_t> a,
                         std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) return false;
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= a[i] ^ b[i];
  return diff == 0;
}

std::pair<Bytes, Block16> aead_encrypt(const AeadParams& params,
                                       std::span<const std::uint8_t> ad,
                                       std::span<const std::uint8_t> msg,
                                       const PermutationSpec& spec) {
  check_budget(params, ad.size(), msg.size(), spec);
  DuplexSponge duplex(spec, params.key, params.nonce);
  duplex.absorb_ad(ad);
  Bytes ct = duplex.encrypt(msg);
  return {std::move(ct), duplex.finalize_tag()};
}

std::optional<Bytes> aead_decrypt(const AeadParams& params,
                                  std::span<const std::uint8_t> ad,
                                  std::span<const std::uint8_t> ct,
                                  const Block16& tag,
                                  const PermutationSpec& spec) {
  check_budget(params, ad.size(), ct.size(), spec);
  DuplexSponge duplex(spec, params.key, params.nonce);
  duplex.absorb_ad(ad);
  Bytes msg = duplex.decrypt(ct);
  const Block16 computed = duplex.finalize_tag();
  if (!constant_time_equal(computed, tag)) return std::nullopt;
  return msg;
}

SessionKeys kdf(const Block16& pmk, const Block16& anonce,
                const Block16& snonce, const MacAddr& ap_mac,
                const MacAddr& sta_mac, const PermutationSpec& spec) {
  Block16 iv{};
  std::copy(anonce.begin() + 8, anonce.end(), iv.begin());
  std::copy(snonce.begin() + 8, snonce.end(), iv.begin() + 8);

  DuplexSponge duplex(spec, pmk, iv);
  // Message input: both MAC addresses in the first 96 bits, then the nonce
  // halves the initial value does not cover, so every nonce bit reaches the
  // derivation.
  std::array<std::uint8_t, 28> msg{};
  std::copy(ap_mac.begin(), ap_mac.end(), msg.begin());
  std::copy(sta_mac.begin(), sta_mac.end(), msg.begin() + 6);
  std::copy(anonce.begin(), anonce.begin() + 8, msg.begin() + 12);
  std::copy(snonce.begin(), snonce.begin() + 8, msg.begin() + 20);
  duplex.encrypt(msg);  // keystream discarded; only the absorption matters

  const Bytes okm = duplex.squeeze_stream(48);
  SessionKeys keys;
  std::copy(okm.begin(), okm.begin() + 16, keys.kck.begin());
  std::copy(okm.begin() + 16, okm.begin() + 32, keys.kek.begin());
  std::copy(okm.begin() + 32, okm.end(), keys.tk.begin());
  return keys;
}

Block16 mic(const Block16& kck, const Block16& nonce,
            const Block16& replay_counter, const PermutationSpec& spec) {
  AeadParams params;
  params.l_ad_blocks = 4;
  params.l_msg_blocks = 0;
  params.key = kck;
  params.nonce = nonce;

  std::array<std::uint8_t, 32> ad{};
  std::copy(nonce.begin(), nonce.end(), ad.begin());
  std::copy(replay_counter.begin(), replay_counter.end(), ad.begin() + 16);

  auto [ct, tag] = aead_encrypt(params, ad, {}, spec);
  return tag;
}

}  // namespace lwlink::crypto
