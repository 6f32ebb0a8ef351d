#include "lwlink/handshake.hpp"

#include <algorithm>
#include <cstring>

#include "lwlink/errors.hpp"
#include "lwlink/rng.hpp"

namespace lwlink::handshake {

namespace {

constexpr std::size_t kKindOffset = 0;
constexpr std::size_t kNonceOffset = 1;
constexpr std::size_t kMicOffset = 17;
constexpr std::size_t kCounterOffset = 33;
constexpr std::size_t kPaddingOffset = 49;

bool kind_has_nonce(MessageKind k) {
  return k == MessageKind::Msg1_ANonce || k == MessageKind::Msg2_SNonceMicA ||
         k == MessageKind::Msg3_ANonceMicS;
}

bool kind_has_mic(MessageKind k) { return k != MessageKind::Msg1_ANonce; }

const crypto::PermutationSpec& spec_for(const PartyState& p) {
  return crypto::PermutationSpec::for_scheme(p.scheme());
}

void verify_mic(const Block16& expected, const std::optional<Block16>& got) {
  if (!got || !crypto::constant_time_equal(expected, *got)) {
    fail(Errc::mic_mismatch, "frame integrity check failed");
  }
}

void check_counter(const Block16& expected, const Block16& got) {
  const int cmp = counter_compare(got, expected);
  if (cmp != 0) {
    fail(Errc::replay_detected, cmp < 0 ? "stale replay counter"
                                        : "replay counter ahead of session");
  }
}

}  // namespace

HandshakeMessage make_message(MessageKind kind,
                              const std::optional<Block16>& nonce,
                              const std::optional<Block16>& mic,
                              const Block16& replay_counter) {
  HandshakeMessage m;
  m.kind = kind;
  m.nonce = nonce;
  m.mic = mic;
  m.replay_counter = replay_counter;
  m.padded_frame.fill(0);
  m.padded_frame[kKindOffset] = static_cast<std::uint8_t>(kind);
  if (nonce) {
    std::copy(nonce->begin(), nonce->end(),
              m.padded_frame.begin() + kNonceOffset);
  }
  if (mic) {
    std::copy(mic->begin(), mic->end(), m.padded_frame.begin() + kMicOffset);
  }
  std::copy(replay_counter.begin(), replay_counter.end(),
            m.padded_frame.begin() + kCounterOffset);
  return m;
}

HandshakeMessage parse_frame(std::span<const std::uint8_t> frame) {
  if (frame.size() != kFrameBytes) {
    fail(Errc::malformed_frame,
         "frame must be 96 bytes, got " + std::to_string(frame.size()));
  }
  const std::uint8_t kind_byte = frame[kKindOffset];
  if (kind_byte < 1 || kind_byte > 4) {
    fail(Errc::malformed_frame, "unknown frame kind");
  }
  const MessageKind kind = static_cast<MessageKind>(kind_byte);

  HandshakeMessage m;
  m.kind = kind;
  std::copy(frame.begin(), frame.end(), m.padded_frame.begin());

  Block16 nonce, mic;
  std::copy(frame.begin() + kNonceOffset, frame.begin() + kNonceOffset + 16,
            nonce.begin());
  std::copy(frame.begin() + kMicOffset, frame.begin() + kMicOffset + 16,
            mic.begin());
  std::copy(frame.begin() + kCounterOffset, frame.begin() + kCounterOffset + 16,
            m.replay_counter.begin());

  const Block16 zero{};
  if (kind_has_nonce(kind)) {
    m.nonce = nonce;
  } else if (nonce != zero) {
    fail(Errc::malformed_frame, "nonce field must be zero for this kind");
  }
  if (kind_has_mic(kind)) {
    m.mic = mic;
  } else if (mic != zero) {
    fail(Errc::malformed_frame, "MIC field must be zero for this kind");
  }
  for (std::size_t i = kPaddingOffset; i < kFrameBytes; ++i) {
    if (frame[i] != 0) {
      fail(Errc::malformed_frame, "nonzero frame padding");
    }
  }
  return m;
}

Block16 cipher_suite_id(Scheme scheme) {
  Block16 id{};
  const char* name = scheme_name(scheme);
  id[0] = static_cast<std::uint8_t>(scheme) + 1;
  std::size_t i = 1;
  for (const char* c = name; *c && i < 10; ++c, ++i) {
    id[i] = static_cast<std::uint8_t>(*c);
  }
  // Fixed mode parameters: 64-bit rate, 128-bit tag.
  id[10] = 64;
  id[11] = 128;
  return id;
}

PartyState::PartyState(Role role, Scheme scheme, const Block16& pmk,
                       const MacAddr& my_mac, const MacAddr& peer_mac,
                       const Block16& replay_counter_base)
    : role_(role),
      scheme_(scheme),
      pmk_(pmk),
      my_mac_(my_mac),
      peer_mac_(peer_mac),
      replay_counter_(replay_counter_base) {}

const SessionKeys& PartyState::session_keys() const {
  if (!keys_) {
    fail(Errc::wrong_phase, "session keys are not derived yet");
  }
  return *keys_;
}

void PartyState::advance_replay_counter(const Block16& next) {
  if (counter_compare(next, replay_counter_) < 0) {
    fail(Errc::replay_detected, "replay counter would decrease");
  }
  replay_counter_ = next;
}

HandshakeMessage auth_start(PartyState& a, const Seed256& rng_seed) {
  if (a.role_ != Role::Authenticator) {
    fail(Errc::wrong_role, "auth_start requires the authenticator");
  }
  if (a.phase_ != Phase::Idle) {
    fail(Errc::wrong_phase, "auth_start requires an idle session");
  }
  Xoshiro256 rng = Xoshiro256::from_bytes(rng_seed);
  a.anonce_ = rng.next_block16();
  a.phase_ = Phase::SentNonce;
  return make_message(MessageKind::Msg1_ANonce, a.anonce_, std::nullopt,
                      a.replay_counter_);
}

HandshakeMessage supplicant_on_msg1(PartyState& s, const HandshakeMessage& m,
                                    const Seed256& rng_seed) {
  if (s.role_ != Role::Supplicant) {
    fail(Errc::wrong_role, "message 1 is handled by the supplicant");
  }
  if (s.phase_ != Phase::Idle) {
    fail(Errc::wrong_phase, "message 1 arrived out of order");
  }
  if (m.kind != MessageKind::Msg1_ANonce || !m.nonce) {
    fail(Errc::malformed_frame, "expected the ANonce message");
  }
  check_counter(s.replay_counter_, m.replay_counter);

  s.anonce_ = *m.nonce;
  Xoshiro256 rng = Xoshiro256::from_bytes(rng_seed);
  s.snonce_ = rng.next_block16();
  // Supplicant talks to the access point: peer MAC first in the derivation.
  s.keys_ = crypto::kdf(s.pmk_, s.anonce_, s.snonce_, s.peer_mac_, s.my_mac_,
                        spec_for(s));
  s.phase_ = Phase::Derived;

  const Block16 mic_a =
      crypto::mic(s.keys_->kck, s.anonce_, m.replay_counter, spec_for(s));
  return make_message(MessageKind::Msg2_SNonceMicA, s.snonce_, mic_a,
                      m.replay_counter);
}

HandshakeMessage authenticator_on_msg2(PartyState& a,
                                       const HandshakeMessage& m) {
  if (a.role_ != Role::Authenticator) {
    fail(Errc::wrong_role, "message 2 is handled by the authenticator");
  }
  if (a.phase_ != Phase::SentNonce) {
    fail(Errc::wrong_phase, "message 2 arrived out of order");
  }
  if (m.kind != MessageKind::Msg2_SNonceMicA || !m.nonce) {
    fail(Errc::malformed_frame, "expected the SNonce message");
  }
  check_counter(a.replay_counter_, m.replay_counter);

  a.snonce_ = *m.nonce;
  a.keys_ = crypto::kdf(a.pmk_, a.anonce_, a.snonce_, a.my_mac_, a.peer_mac_,
                        spec_for(a));
  verify_mic(crypto::mic(a.keys_->kck, a.anonce_, a.replay_counter_,
                         spec_for(a)),
             m.mic);
  a.phase_ = Phase::Derived;

  const Block16 mic_s =
      crypto::mic(a.keys_->kck, a.snonce_, a.replay_counter_, spec_for(a));
  return make_message(MessageKind::Msg3_ANonceMicS, a.anonce_, mic_s,
                      a.replay_counter_);
}

HandshakeMessage supplicant_on_msg3(PartyState& s, const HandshakeMessage& m) {
  if (s.role_ != Role::Supplicant) {
    fail(Errc::wrong_role, "message 3 is handled by the supplicant");
  }
  if (s.phase_ != Phase::Derived) {
    fail(Errc::wrong_phase, "message 3 arrived out of order");
  }
  if (m.kind != MessageKind::Msg3_ANonceMicS || !m.nonce) {
    fail(Errc::malformed_frame, "expected the ANonce echo message");
  }
  check_counter(s.replay_counter_, m.replay_counter);
  if (*m.nonce != s.anonce_) {
    fail(Errc::nonce_mismatch, "ANonce echo does not match message 1");
  }
  verify_mic(crypto::mic(s.keys_->kck, s.snonce_, s.replay_counter_,
                         spec_for(s)),
             m.mic);

  const Block16 next = counter_increment(s.replay_counter_);
  const Block16 mic_all = crypto::mic(s.keys_->kck, cipher_suite_id(s.scheme_),
                                      next, spec_for(s));
  s.advance_replay_counter(next);
  s.phase_ = Phase::Installed;
  return make_message(MessageKind::Msg4_MicAll, std::nullopt, mic_all, next);
}

void authenticator_on_msg4(PartyState& a, const HandshakeMessage& m) {
  if (a.role_ != Role::Authenticator) {
    fail(Errc::wrong_role, "message 4 is handled by the authenticator");
  }
  if (a.phase_ != Phase::Derived) {
    fail(Errc::wrong_phase, "message 4 arrived out of order");
  }
  if (m.kind != MessageKind::Msg4_MicAll) {
    fail(Errc::malformed_frame, "expected the final confirmation message");
  }
  const Block16 next = counter_increment(a.replay_counter_);
  check_counter(next, m.replay_counter);
  verify_mic(crypto::mic(a.keys_->kck, cipher_suite_id(a.scheme_), next,
                         spec_for(a)),
             m.mic);
  a.advance_replay_counter(next);
  a.phase_ = Phase::Installed;
}

ProtectedRecord protect(PartyState& p, std::span<const std::uint8_t> ad,
                        std::span<const std::uint8_t> msg) {
  if (p.phase_ != Phase::Installed) {
    fail(Errc::not_installed, "traffic key is not installed");
  }
  if (msg.size() > kMaxRecordMsgBytes || ad.size() > kMaxRecordAdBytes) {
    fail(Errc::oversize_input, "record exceeds the AEAD block budget");
  }
  crypto::AeadParams params;
  params.l_ad_blocks = ad.empty() ? 0 : 2;
  params.l_msg_blocks = 16;
  params.key = p.keys_->tk;
  const std::uint64_t seq = ++p.tx_seq_;
  for (int i = 0; i < 8; ++i) {
    params.nonce[i] = static_cast<std::uint8_t>(seq >> (8 * i));
  }

  auto [ct, tag] =
      crypto::aead_encrypt(params, ad, msg,
                           crypto::PermutationSpec::for_scheme(p.scheme_));
  ProtectedRecord rec;
  rec.ad.assign(ad.begin(), ad.end());
  rec.ciphertext = std::move(ct);
  rec.tag = tag;
  rec.seq = seq;
  return rec;
}

Bytes unprotect(PartyState& p, const ProtectedRecord& rec) {
  if (p.phase_ != Phase::Installed) {
    fail(Errc::not_installed, "traffic key is not installed");
  }
  if (rec.seq <= p.rx_seq_high_) {
    fail(Errc::replay_detected, "record sequence number is not fresh");
  }
  crypto::AeadParams params;
  params.l_ad_blocks = rec.ad.empty() ? 0 : 2;
  params.l_msg_blocks = 16;
  params.key = p.keys_->tk;
  for (int i = 0; i < 8; ++i) {
    params.nonce[i] = static_cast<std::uint8_t>(rec.seq >> (8 * i));
  }
  auto plain =
      crypto::aead_decrypt(params, rec.ad, rec.ciphertext, rec.tag,
                           crypto::PermutationSpec::for_scheme(p.scheme_));
  if (!plain) {
    fail(Errc::auth_failure, "record tag verification failed");
  }
  p.rx_seq_high_ = rec.seq;
  return std::move(*plain);
}

}  // namespace lwlink::handshake
