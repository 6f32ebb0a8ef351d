#pragma once

#include <cstdint>
#include <optional>

#include "lwlink/aead.hpp"
#include "lwlink/common.hpp"

namespace lwlink::handshake {

using crypto::SessionKeys;

enum class Role { Supplicant, Authenticator };
enum class Phase { Idle, SentNonce, Derived, Confirmed, Installed };

enum class MessageKind : std::uint8_t {
  Msg1_ANonce = 1,
  Msg2_SNonceMicA = 2,
  Msg3_ANonceMicS = 3,
  Msg4_MicAll = 4,
};

constexpr std::size_t kFrameBytes = 96;
using Frame = std::array<std::uint8_t, kFrameBytes>;

// One protocol frame. The 96-byte wire image carries the fields at fixed
// offsets (kind at 0, nonce at 1..16, MIC at 17..32, replay counter at
// 33..48) with zero padding; fields a kind does not use must be zero.
struct HandshakeMessage {
  MessageKind kind = MessageKind::Msg1_ANonce;
  std::optional<Block16> nonce;
  std::optional<Block16> mic;
  Block16 replay_counter{};
  Frame padded_frame{};
};

HandshakeMessage make_message(MessageKind kind,
                              const std::optional<Block16>& nonce,
                              const std::optional<Block16>& mic,
                              const Block16& replay_counter);

// Parses and validates a wire frame; rejects wrong lengths, unknown kinds
// and nonzero padding in unused regions.
HandshakeMessage parse_frame(std::span<const std::uint8_t> frame);

// 128-bit cipher-suite identifier bound into the final confirmation tag.
Block16 cipher_suite_id(Scheme scheme);

struct ProtectedRecord;

// Per-party protocol state. Session keys are unreadable until the key
// derivation step has run.
class PartyState {
 public:
  PartyState(Role role, Scheme scheme, const Block16& pmk,
             const MacAddr& my_mac, const MacAddr& peer_mac,
             const Block16& replay_counter_base);

  Role role() const { return role_; }
  Scheme scheme() const { return scheme_; }
  Phase phase() const { return phase_; }
  const Block16& replay_counter() const { return replay_counter_; }
  const Block16& anonce() const { return anonce_; }
  const Block16& snonce() const { return snonce_; }

  // Throws until the handshake has derived keys.
  const SessionKeys& session_keys() const;
  bool keys_derived() const { return keys_.has_value(); }

  friend HandshakeMessage auth_start(PartyState& a, const Seed256& rng_seed);
  friend HandshakeMessage supplicant_on_msg1(PartyState& s,
                                             const HandshakeMessage& m,
                                             const Seed256& rng_seed);
  friend HandshakeMessage authenticator_on_msg2(PartyState& a,
                                                const HandshakeMessage& m);
  friend HandshakeMessage supplicant_on_msg3(PartyState& s,
                                             const HandshakeMessage& m);
  friend void authenticator_on_msg4(PartyState& a, const HandshakeMessage& m);

  friend ProtectedRecord protect(PartyState& p,
                                 std::span<const std::uint8_t> ad,
                                 std::span<const std::uint8_t> msg);
  friend Bytes unprotect(PartyState& p, const ProtectedRecord& rec);

 private:
  void advance_replay_counter(const Block16& next);

  Role role_;
  Scheme scheme_;
  Block16 pmk_;
  MacAddr my_mac_;
  MacAddr peer_mac_;
  Block16 replay_counter_;
  Phase phase_ = Phase::Idle;
  Block16 anonce_{};
  Block16 snonce_{};
  std::optional<SessionKeys> keys_;
  std::uint64_t tx_seq_ = 0;        // last sequence number sent
  std::uint64_t rx_seq_high_ = 0;   // highest sequence number accepted
};

// Protocol steps (message flow: Msg1 ANonce -> Msg2 SNonce+MIC_A ->
// Msg3 ANonce+MIC_S -> Msg4 MIC_all). Verification failures abort the
// session by throwing SimError with the matching code.
HandshakeMessage auth_start(PartyState& a, const Seed256& rng_seed);
HandshakeMessage supplicant_on_msg1(PartyState& s, const HandshakeMessage& m,
                                    const Seed256& rng_seed);
HandshakeMessage authenticator_on_msg2(PartyState& a,
                                       const HandshakeMessage& m);
HandshakeMessage supplicant_on_msg3(PartyState& s, const HandshakeMessage& m);
void authenticator_on_msg4(PartyState& a, const HandshakeMessage& m);

// Traffic protection after key installation.
struct ProtectedRecord {
  Bytes ad;
  Bytes ciphertext;
  Block16 tag{};
  std::uint64_t seq = 0;
};

constexpr std::size_t kMaxRecordMsgBytes = 128;  // 16 message blocks
constexpr std::size_t kMaxRecordAdBytes = 16;    // up to 2 AD blocks

ProtectedRecord protect(PartyState& p, std::span<const std::uint8_t> ad,
                        std::span<const std::uint8_t> msg);
Bytes unprotect(PartyState& p, const ProtectedRecord& rec);

}  // namespace lwlink::handshake
