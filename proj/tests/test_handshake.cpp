#include <doctest.h>

#include <algorithm>
#include <functional>

#include "lwlink/errors.hpp"
#include "lwlink/handshake.hpp"
#include "lwlink/rng.hpp"

using namespace lwlink;
using namespace lwlink::handshake;

namespace {

struct Pair {
  PartyState authenticator;
  PartyState supplicant;
};

Pair make_pair(std::uint64_t counter_base = 1,
               Scheme scheme = Scheme::Reference) {
  Xoshiro256 rng = Xoshiro256::seeded(99);
  const Block16 pmk = rng.next_block16();
  const MacAddr ap{0x02, 0x00, 0x5e, 0x10, 0x00, 0x01};
  const MacAddr sta{0x02, 0x00, 0x5e, 0x10, 0x00, 0x02};
  const Block16 base = counter_from_u64(counter_base);
  return Pair{
      PartyState(Role::Authenticator, scheme, pmk, ap, sta, base),
      PartyState(Role::Supplicant, scheme, pmk, sta, ap, base),
  };
}

struct Run {
  Pair p;
  HandshakeMessage m1, m2, m3, m4;
};

Run honest_run(std::uint64_t seed = 7, std::uint64_t counter_base = 1) {
  Run r{make_pair(counter_base), {}, {}, {}, {}};
  r.m1 = auth_start(r.p.authenticator, derive_seed(seed, 1));
  r.m2 = supplicant_on_msg1(r.p.supplicant, parse_frame(r.m1.padded_frame),
                            derive_seed(seed, 2));
  r.m3 = authenticator_on_msg2(r.p.authenticator,
                               parse_frame(r.m2.padded_frame));
  r.m4 = supplicant_on_msg3(r.p.supplicant, parse_frame(r.m3.padded_frame));
  authenticator_on_msg4(r.p.authenticator, parse_frame(r.m4.padded_frame));
  return r;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SimError& e) {
    return e.code();
  }
  return Errc::parse_error;
}

}  // namespace

TEST_SUITE("handshake") {

TEST_CASE("honest run installs identical keys on both sides") {
  Run r = honest_run();
  CHECK(r.p.authenticator.phase() == Phase::Installed);
  CHECK(r.p.supplicant.phase() == Phase::Installed);
  CHECK(r.p.authenticator.session_keys() == r.p.supplicant.session_keys());

  // 4 frames x 96 bytes on the wire.
  std::size_t total = 0;
  for (const auto* m : {&r.m1, &r.m2, &r.m3, &r.m4}) {
    total += m->padded_frame.size();
  }
  CHECK(total == 384);
}

TEST_CASE("nonce generation is reproducible and seed-sensitive") {
  Pair a = make_pair();
  Pair b = make_pair();
  const auto m1a = auth_start(a.authenticator, derive_seed(5, 1));
  const auto m1b = auth_start(b.authenticator, derive_seed(5, 1));
  CHECK(m1a.padded_frame == m1b.padded_frame);

  Pair c = make_pair();
  const auto m1c = auth_start(c.authenticator, derive_seed(6, 1));
  CHECK(m1a.nonce != m1c.nonce);
}

TEST_CASE("frames carry fields at fixed offsets with zero padding") {
  Run r = honest_run();
  const auto& f = r.m2.padded_frame;
  CHECK(f.size() == 96);
  CHECK(f[0] == 2);
  Block16 nonce, mic_field, counter;
  std::copy(f.begin() + 1, f.begin() + 17, nonce.begin());
  std::copy(f.begin() + 17, f.begin() + 33, mic_field.begin());
  std::copy(f.begin() + 33, f.begin() + 49, counter.begin());
  CHECK(nonce == *r.m2.nonce);
  CHECK(mic_field == *r.m2.mic);
  CHECK(counter == r.m2.replay_counter);
  for (std::size_t i = 49; i < 96; ++i) CHECK(f[i] == 0);
}

TEST_CASE("truncated or malformed frames are rejected") {
  Run r = honest_run();
  std::vector<std::uint8_t> truncated(r.m1.padded_frame.begin(),
                                      r.m1.padded_frame.end() - 1);
  CHECK(code_of([&] { parse_frame(truncated); }) == Errc::malformed_frame);

  Frame bad_kind = r.m1.padded_frame;
  bad_kind[0] = 9;
  CHECK(code_of([&] { parse_frame(bad_kind); }) == Errc::malformed_frame);

  Frame bad_padding = r.m1.padded_frame;
  bad_padding[80] = 1;
  CHECK(code_of([&] { parse_frame(bad_padding); }) == Errc::malformed_frame);

  // Msg1 must not carry a MIC.
  Frame mic_in_msg1 = r.m1.padded_frame;
  mic_in_msg1[20] = 0xFF;
  CHECK(code_of([&] { parse_frame(mic_in_msg1); }) == Errc::malformed_frame);
}

TEST_CASE("role and phase gates") {
  Pair p = make_pair();
  CHECK(code_of([&] { auth_start(p.supplicant, derive_seed(1, 1)); }) ==
        Errc::wrong_role);

  const auto m1 = auth_start(p.authenticator, derive_seed(1, 1));
  CHECK(code_of([&] { auth_start(p.authenticator, derive_seed(1, 2)); }) ==
        Errc::wrong_phase);

  // Msg3 before Msg1 on a fresh supplicant.
  Pair q = make_pair();
  const auto frame = parse_frame(m1.padded_frame);
  CHECK(code_of([&] { supplicant_on_msg3(q.supplicant, frame); }) ==
        Errc::wrong_phase);
}

TEST_CASE("keys are unreadable before derivation") {
  Pair p = make_pair();
  CHECK_THROWS_AS(p.supplicant.session_keys(), SimError);
  auth_start(p.authenticator, derive_seed(2, 1));
  CHECK_THROWS_AS(p.authenticator.session_keys(), SimError);
}

TEST_CASE("flipped MIC bits abort at the right step") {
  // Authenticator rejects a tampered MIC_A.
  Pair p = make_pair();
  auto m1 = auth_start(p.authenticator, derive_seed(3, 1));
  auto m2 = supplicant_on_msg1(p.supplicant, parse_frame(m1.padded_frame),
                               derive_seed(3, 2));
  Frame tampered = m2.padded_frame;
  tampered[17] ^= 0x01;
  CHECK(code_of([&] {
          authenticator_on_msg2(p.authenticator, parse_frame(tampered));
        }) == Errc::mic_mismatch);
}

TEST_CASE("substituted ANonce in message 3 is caught") {
  Pair p = make_pair();
  auto m1 = auth_start(p.authenticator, derive_seed(4, 1));
  auto m2 = supplicant_on_msg1(p.supplicant, parse_frame(m1.padded_frame),
                               derive_seed(4, 2));
  auto m3 = authenticator_on_msg2(p.authenticator, parse_frame(m2.padded_frame));
  Frame tampered = m3.padded_frame;
  tampered[5] ^= 0x10;  // inside the nonce echo
  CHECK(code_of([&] {
          supplicant_on_msg3(p.supplicant, parse_frame(tampered));
        }) == Errc::nonce_mismatch);
}

TEST_CASE("final confirmation must use the incremented counter") {
  Pair p = make_pair();
  auto m1 = auth_start(p.authenticator, derive_seed(5, 1));
  auto m2 = supplicant_on_msg1(p.supplicant, parse_frame(m1.padded_frame),
                               derive_seed(5, 2));
  auto m3 = authenticator_on_msg2(p.authenticator, parse_frame(m2.padded_frame));
  auto m4 = supplicant_on_msg3(p.supplicant, parse_frame(m3.padded_frame));

  // Forge Msg4 with the stale counter r (not r+1): the MIC verifies only
  // with r+1, so the authenticator rejects.
  const Block16 stale = m3.replay_counter;
  const Block16 mic_stale =
      crypto::mic(p.supplicant.session_keys().kck,
                  cipher_suite_id(Scheme::Reference), stale,
                  crypto::PermutationSpec::for_scheme(Scheme::Reference));
  const auto forged =
      make_message(MessageKind::Msg4_MicAll, std::nullopt, mic_stale, stale);
  CHECK(code_of([&] {
          authenticator_on_msg4(p.authenticator,
                                parse_frame(forged.padded_frame));
        }) == Errc::replay_detected);

  // Honest Msg4 still lands afterwards.
  authenticator_on_msg4(p.authenticator, parse_frame(m4.padded_frame));
  CHECK(p.authenticator.phase() == Phase::Installed);
}

TEST_CASE("wrong cipher-suite field breaks the final MIC") {
  Pair p = make_pair(1, Scheme::Spix);
  auto m1 = auth_start(p.authenticator, derive_seed(6, 1));
  auto m2 = supplicant_on_msg1(p.supplicant, parse_frame(m1.padded_frame),
                               derive_seed(6, 2));
  auto m3 = authenticator_on_msg2(p.authenticator, parse_frame(m2.padded_frame));
  auto m4 = supplicant_on_msg3(p.supplicant, parse_frame(m3.padded_frame));

  // Recompute MIC_all over a different suite identifier.
  const Block16 wrong_d = cipher_suite_id(Scheme::Wage);
  const Block16 bad_mic =
      crypto::mic(p.supplicant.session_keys().kck, wrong_d, m4.replay_counter,
                  crypto::PermutationSpec::for_scheme(Scheme::Spix));
  const auto forged = make_message(MessageKind::Msg4_MicAll, std::nullopt,
                                   bad_mic, m4.replay_counter);
  CHECK(code_of([&] {
          authenticator_on_msg4(p.authenticator,
                                parse_frame(forged.padded_frame));
        }) == Errc::mic_mismatch);
}

TEST_CASE("replays into a fresh session with a new counter are rejected") {
  Run old_session = honest_run(/*seed=*/11, /*counter_base=*/1);

  // Fresh session, larger counter base.
  Pair fresh = make_pair(/*counter_base=*/1000);
  auth_start(fresh.authenticator, derive_seed(12, 1));

  CHECK(code_of([&] {
          supplicant_on_msg1(fresh.supplicant,
                             parse_frame(old_session.m1.padded_frame),
                             derive_seed(12, 2));
        }) == Errc::replay_detected);

  CHECK(code_of([&] {
          authenticator_on_msg2(fresh.authenticator,
                                parse_frame(old_session.m2.padded_frame));
        }) == Errc::replay_detected);
}

TEST_CASE("replayed message 2 within a session is stale") {
  Pair p = make_pair(5);
  auto m1 = auth_start(p.authenticator, derive_seed(13, 1));
  auto m2 = supplicant_on_msg1(p.supplicant, parse_frame(m1.padded_frame),
                               derive_seed(13, 2));
  // Rewind the counter field (MIC recomputed so only staleness can trip).
  auto frame = m2.padded_frame;
  Block16 old_counter = counter_from_u64(4);
  std::copy(old_counter.begin(), old_counter.end(), frame.begin() + 33);
  CHECK(code_of([&] {
          authenticator_on_msg2(p.authenticator, parse_frame(frame));
        }) == Errc::replay_detected);
}

TEST_CASE("protect/unprotect roundtrip with both AD shapes") {
  Run r = honest_run();
  Xoshiro256 rng = Xoshiro256::seeded(55);
  for (std::size_t ad_len : {std::size_t{0}, std::size_t{16}}) {
    Bytes ad(ad_len), msg(128);
    rng.fill(ad);
    rng.fill(msg);
    const auto rec = protect(r.p.supplicant, ad, msg);
    CHECK(rec.ciphertext.size() == 128);
    CHECK(rec.tag.size() == 16);
    const Bytes plain = unprotect(r.p.authenticator, rec);
    CHECK(plain == msg);
  }
}

TEST_CASE("traffic protection gates") {
  Pair p = make_pair();
  Bytes msg(16, 0x11);
  CHECK(code_of([&] { protect(p.supplicant, {}, msg); }) ==
        Errc::not_installed);

  Run r = honest_run();
  Bytes big(129);
  CHECK(code_of([&] { protect(r.p.supplicant, {}, big); }) ==
        Errc::oversize_input);
  Bytes big_ad(17);
  CHECK(code_of([&] { protect(r.p.supplicant, big_ad, msg); }) ==
        Errc::oversize_input);
}

TEST_CASE("record replay and tampering are rejected") {
  Run r = honest_run();
  Bytes msg(64, 0x42);
  const auto rec = protect(r.p.supplicant, {}, msg);
  CHECK(unprotect(r.p.authenticator, rec) == msg);
  CHECK(code_of([&] { unprotect(r.p.authenticator, rec); }) ==
        Errc::replay_detected);

  auto rec2 = protect(r.p.supplicant, {}, msg);
  rec2.ciphertext[10] ^= 0x04;
  CHECK(code_of([&] { unprotect(r.p.authenticator, rec2); }) ==
        Errc::auth_failure);
}

TEST_CASE("replay counter never decreases across the run") {
  Run r = honest_run(21, 77);
  CHECK(counter_compare(r.p.supplicant.replay_counter(),
                        counter_from_u64(77)) > 0);
  CHECK(r.p.supplicant.replay_counter() ==
        r.p.authenticator.replay_counter());
}

}  // TEST_SUITE
