#include <doctest.h>

#include <algorithm>

#include "lwlink/aead.hpp"
#include "lwlink/errors.hpp"
#include "lwlink/kat.hpp"
#include "lwlink/rng.hpp"
#include "lwlink/sponge.hpp"

using namespace lwlink;
using namespace lwlink::crypto;

namespace {

AeadParams params_for(std::uint64_t l_ad, std::uint64_t l_msg, const Block16& key,
                      const Block16& nonce) {
  AeadParams p;
  p.l_ad_blocks = l_ad;
  p.l_msg_blocks = l_msg;
  p.key = key;
  p.nonce = nonce;
  return p;
}

const PermutationSpec& ref_spec() {
  return PermutationSpec::for_scheme(Scheme::Reference);
}

}  // namespace

TEST_SUITE("aead") {

TEST_CASE("empty message and AD still produce a deterministic 128-bit tag") {
  Xoshiro256 rng = Xoshiro256::seeded(1);
  const Block16 key = rng.next_block16();
  const Block16 nonce = rng.next_block16();
  const auto params = params_for(0, 0, key, nonce);
  auto [ct1, tag1] = aead_encrypt(params, {}, {}, ref_spec());
  auto [ct2, tag2] = aead_encrypt(params, {}, {}, ref_spec());
  CHECK(ct1.empty());
  CHECK(tag1 == tag2);
  CHECK(tag1.size() == 16);
  const auto plain = aead_decrypt(params, {}, {}, tag1, ref_spec());
  REQUIRE(plain.has_value());
  CHECK(plain->empty());
}

TEST_CASE("roundtrip on a 1024-bit message") {
  Xoshiro256 rng = Xoshiro256::seeded(2);
  const auto params = params_for(0, 16, rng.next_block16(), rng.next_block16());
  Bytes msg(128);
  rng.fill(msg);
  for (Scheme s : {Scheme::Reference, Scheme::Spix, Scheme::Ace, Scheme::Wage}) {
    const auto& spec = PermutationSpec::for_scheme(s);
    auto [ct, tag] = aead_encrypt(params, {}, msg, spec);
    CHECK(ct.size() == msg.size());
    CHECK(ct != msg);
    const auto plain = aead_decrypt(params, {}, ct, tag, spec);
    REQUIRE(plain.has_value());
    CHECK(*plain == msg);
  }
}

TEST_CASE("roundtrip identity for every message size up to the budget") {
  Xoshiro256 rng = Xoshiro256::seeded(3);
  const auto params = params_for(2, 4, rng.next_block16(), rng.next_block16());
  Bytes ad(11);
  rng.fill(ad);
  for (std::size_t n = 0; n <= 32; ++n) {
    Bytes msg(n);
    rng.fill(msg);
    auto [ct, tag] = aead_encrypt(params, ad, msg, ref_spec());
    CHECK(ct.size() == n);
    const auto plain = aead_decrypt(params, ad, ct, tag, ref_spec());
    REQUIRE(plain.has_value());
    CHECK(*plain == msg);
  }
}

TEST_CASE("every single ciphertext bit flip breaks authentication") {
  Xoshiro256 rng = Xoshiro256::seeded(4);
  const auto params = params_for(0, 1, rng.next_block16(), rng.next_block16());
  Bytes msg(8);
  rng.fill(msg);
  auto [ct, tag] = aead_encrypt(params, {}, msg, ref_spec());
  for (std::size_t bit = 0; bit < 64; ++bit) {
    Bytes tampered = ct;
    tampered[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    CHECK_FALSE(aead_decrypt(params, {}, tampered, tag, ref_spec()).has_value());
  }
}

TEST_CASE("tampered tag or AD is rejected") {
  Xoshiro256 rng = Xoshiro256::seeded(5);
  const auto params = params_for(2, 2, rng.next_block16(), rng.next_block16());
  Bytes ad(16), msg(16);
  rng.fill(ad);
  rng.fill(msg);
  auto [ct, tag] = aead_encrypt(params, ad, msg, ref_spec());

  Block16 bad_tag = tag;
  bad_tag[15] ^= 0x01;  // last bit of the tag
  CHECK_FALSE(aead_decrypt(params, ad, ct, bad_tag, ref_spec()).has_value());

  Bytes bad_ad = ad;
  bad_ad[3] ^= 0x40;
  CHECK_FALSE(aead_decrypt(params, bad_ad, ct, tag, ref_spec()).has_value());
}

TEST_CASE("oversize inputs and data budget are enforced") {
  Xoshiro256 rng = Xoshiro256::seeded(6);
  const Block16 key = rng.next_block16();
  const Block16 nonce = rng.next_block16();
  Bytes msg(9);
  rng.fill(msg);
  CHECK_THROWS_AS(aead_encrypt(params_for(0, 1, key, nonce), {}, msg,
                               ref_spec()),
                  SimError);
  // Declared blocks beyond 2^d(=60) bits of data.
  auto big = params_for(0, 1, key, nonce);
  big.l_ad_blocks = 1ULL << 55;
  try {
    aead_encrypt(big, {}, {}, ref_spec());
    FAIL("data limit not enforced");
  } catch (const SimError& e) {
    CHECK(e.code() == Errc::data_limit_exceeded);
  }
}

TEST_CASE("forgery property: random single-bit perturbations never verify") {
  Xoshiro256 rng = Xoshiro256::seeded(7);
  const auto params = params_for(2, 4, rng.next_block16(), rng.next_block16());
  Bytes ad(16), msg(32);
  rng.fill(ad);
  rng.fill(msg);
  auto [ct, tag] = aead_encrypt(params, ad, msg, ref_spec());

  int accepted = 0;
  const std::size_t trials = 2000;
  for (std::size_t t = 0; t < trials; ++t) {
    Bytes a = ad, c = ct;
    Block16 g = tag;
    auto p = params;
    const std::size_t total_bits = 8 * (a.size() + c.size() + 16 + 16);
    const std::size_t bit = rng.next() % total_bits;
    std::size_t idx = bit / 8;
    const std::uint8_t flip = static_cast<std::uint8_t>(1u << (bit % 8));
    if (idx < a.size()) {
      a[idx] ^= flip;
    } else if ((idx -= a.size()) < c.size()) {
      c[idx] ^= flip;
    } else if ((idx -= c.size()) < 16) {
      g[idx] ^= flip;
    } else {
      p.nonce[idx - 16] ^= flip;
    }
    if (aead_decrypt(p, a, c, g, ref_spec()).has_value()) ++accepted;
  }
  CHECK(accepted == 0);
}

TEST_CASE("KDF is deterministic and splits 384 bits into three subkeys") {
  Xoshiro256 rng = Xoshiro256::seeded(8);
  const Block16 pmk = rng.next_block16();
  const Block16 anonce = rng.next_block16();
  const Block16 snonce = rng.next_block16();
  MacAddr ap{}, sta{};
  rng.fill(ap);
  rng.fill(sta);

  const SessionKeys a = kdf(pmk, anonce, snonce, ap, sta, ref_spec());
  const SessionKeys b = kdf(pmk, anonce, snonce, ap, sta, ref_spec());
  CHECK(a == b);
  CHECK(a.kck.size() + a.kek.size() + a.tk.size() == 48);  // 384 bits
  CHECK(a.kck != a.kek);
  CHECK(a.kek != a.tk);
}

TEST_CASE("KDF: flipping any input bit changes all three subkeys") {
  Xoshiro256 rng = Xoshiro256::seeded(9);
  const Block16 pmk = rng.next_block16();
  const Block16 anonce = rng.next_block16();
  const Block16 snonce = rng.next_block16();
  MacAddr ap{}, sta{};
  rng.fill(ap);
  rng.fill(sta);
  const SessionKeys base = kdf(pmk, anonce, snonce, ap, sta, ref_spec());

  auto check_differs = [&](const SessionKeys& other) {
    CHECK(other.kck != base.kck);
    CHECK(other.kek != base.kek);
    CHECK(other.tk != base.tk);
  };

  for (std::size_t bit = 0; bit < 128; ++bit) {
    Block16 m = pmk;
    m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    check_differs(kdf(m, anonce, snonce, ap, sta, ref_spec()));
  }
  for (std::size_t bit = 0; bit < 128; ++bit) {
    Block16 m = anonce;
    m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    check_differs(kdf(pmk, m, snonce, ap, sta, ref_spec()));
    Block16 n = snonce;
    n[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    check_differs(kdf(pmk, anonce, n, ap, sta, ref_spec()));
  }
  for (std::size_t bit = 0; bit < 48; ++bit) {
    MacAddr m = ap;
    m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    check_differs(kdf(pmk, anonce, snonce, m, sta, ref_spec()));
    MacAddr n = sta;
    n[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    check_differs(kdf(pmk, anonce, snonce, ap, n, ref_spec()));
  }
}

TEST_CASE("MIC determinism and sensitivity") {
  Xoshiro256 rng = Xoshiro256::seeded(10);
  const Block16 kck = rng.next_block16();
  const Block16 nonce = rng.next_block16();
  const Block16 r = counter_from_u64(7);

  CHECK(mic(kck, nonce, r, ref_spec()) == mic(kck, nonce, r, ref_spec()));
  CHECK(mic(kck, nonce, r, ref_spec()) !=
        mic(kck, nonce, counter_increment(r), ref_spec()));

  const Block16 base = mic(kck, nonce, r, ref_spec());
  for (std::size_t bit = 0; bit < 128; ++bit) {
    Block16 k = kck;
    k[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    CHECK(mic(k, nonce, r, ref_spec()) != base);
  }
}

TEST_CASE("sponge phases only move forward") {
  Xoshiro256 rng = Xoshiro256::seeded(11);
  const Block16 key = rng.next_block16();
  const Block16 nonce = rng.next_block16();

  DuplexSponge d1(ref_spec(), key, nonce);
  Bytes block(8, 0xAB);
  d1.encrypt(block);
  CHECK_THROWS_AS(d1.absorb_ad(block), SimError);  // AD after message

  DuplexSponge d2(ref_spec(), key, nonce);
  d2.finalize_tag();
  CHECK_THROWS_AS(d2.encrypt(block), SimError);    // message after tag
  CHECK_THROWS_AS(d2.finalize_tag(), SimError);    // tag twice

  DuplexSponge d3(ref_spec(), key, nonce);
  d3.squeeze_stream(48);
  CHECK_THROWS_AS(d3.finalize_tag(), SimError);    // tag after stream
}

TEST_CASE("checked-in vectors verify for every suite") {
  for (auto [scheme, path] :
       {std::pair{Scheme::Reference, "data/kat/reference.kat"},
        std::pair{Scheme::Spix, "data/kat/spix.kat"},
        std::pair{Scheme::Ace, "data/kat/ace.kat"},
        std::pair{Scheme::Wage, "data/kat/wage.kat"}}) {
    const auto records = load_kat_file(path);
    REQUIRE(records.size() == 10);
    const auto result = verify_kat(records, scheme);
    CHECK(result.failed == 0);
  }
}

TEST_CASE("vectors do not verify under the wrong suite") {
  const auto records = load_kat_file("data/kat/ace.kat");
  const auto result = verify_kat(records, Scheme::Spix);
  CHECK(result.failed == result.total);
}

}  // TEST_SUITE
