#include <doctest.h>

#include <cmath>
#include <numeric>

#include "lwlink/errors.hpp"
#include "lwlink/fft.hpp"
#include "lwlink/ofdm_tx.hpp"
#include "lwlink/rng.hpp"
#include "oracles.hpp"

using namespace lwlink;
using namespace lwlink::ofdm;

namespace {

std::vector<cfloat> random_vector(Xoshiro256& rng, std::size_t n) {
  std::vector<cfloat> v(n);
  for (auto& s : v) {
    s = cfloat(static_cast<float>(2.0 * rng.unit() - 1.0),
               static_cast<float>(2.0 * rng.unit() - 1.0));
  }
  return v;
}

double max_abs_err(std::span<const cfloat> a, std::span<const cfloat> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, static_cast<double>(std::abs(a[i] - b[i])));
  }
  return worst;
}

double energy(std::span<const cfloat> v) {
  double e = 0.0;
  for (const cfloat& s : v) e += std::norm(std::complex<double>(s.real(), s.imag()));
  return e;
}

}  // namespace

TEST_SUITE("ofdm_tx") {

TEST_CASE("tag_stream splits and pads to 96-byte units") {
  Bytes data(384);
  std::iota(data.begin(), data.end(), 0);
  const auto four = tag_stream(data);
  REQUIRE(four.size() == 4);
  for (std::size_t f = 0; f < 4; ++f) {
    CHECK(four[f].frame_index == f);
    CHECK(four[f].bytes[0] == data[96 * f]);
  }

  CHECK(tag_stream({}).empty());

  Bytes odd(97, 0xAA);
  const auto two = tag_stream(odd);
  REQUIRE(two.size() == 2);
  CHECK(two[1].bytes[0] == 0xAA);
  for (std::size_t i = 1; i < 96; ++i) CHECK(two[1].bytes[i] == 0);
}

TEST_CASE("header is 48 one-bit bytes with a verifiable CRC") {
  TaggedPayload p;
  p.frame_index = 1234;
  Xoshiro256 rng = Xoshiro256::seeded(1);
  rng.fill(p.bytes);

  const auto h1 = generate_header(p);
  const auto h2 = generate_header(p);
  CHECK(h1 == h2);
  CHECK(h1.size() == 48);
  for (std::uint8_t b : h1) CHECK(b <= 1);

  // Repack the first 24 bits and check the CRC field against the
  // independent bitwise oracle.
  std::array<std::uint8_t, 3> packed{};
  for (int i = 0; i < 24; ++i) {
    packed[i / 8] |= static_cast<std::uint8_t>((h1[i] & 1) << (i % 8));
  }
  std::uint8_t crc_field = 0;
  for (int i = 0; i < 8; ++i) {
    crc_field |= static_cast<std::uint8_t>((h1[24 + i] & 1) << i);
  }
  CHECK(crc_field == oracles::bitwise_crc8(packed));

  const auto decoded = decode_header(h1);
  REQUIRE(decoded.has_value());
  CHECK(decoded->payload_len == 96);
  CHECK(decoded->frame_index == 1234);

  auto corrupted = h1;
  corrupted[3] ^= 1;
  CHECK_FALSE(decode_header(corrupted).has_value());
}

TEST_CASE("repack splits bytes least-significant pair first") {
  CHECK(repack_bits(0x00) == std::array<std::uint8_t, 4>{0, 0, 0, 0});
  CHECK(repack_bits(0xFF) == std::array<std::uint8_t, 4>{3, 3, 3, 3});
  CHECK(repack_bits(0xE4) == std::array<std::uint8_t, 4>{0, 1, 2, 3});
}

TEST_CASE("constellation maps") {
  CHECK(map_bpsk(0x00) == cfloat(-1.f, 0.f));
  CHECK(map_bpsk(0x01) == cfloat(1.f, 0.f));
  CHECK_THROWS_AS(map_bpsk(0x02), SimError);

  CHECK(map_qpsk(0x03).real() == doctest::Approx(0.7071).epsilon(1e-3));
  CHECK(map_qpsk(0x03).imag() == doctest::Approx(0.7071).epsilon(1e-3));
  for (std::uint8_t b = 0; b < 4; ++b) {
    CHECK(std::abs(map_qpsk(b)) == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(map_qpsk(0x04), SimError);
}

TEST_CASE("mux is strict about lengths and preserves order") {
  Xoshiro256 rng = Xoshiro256::seeded(2);
  const auto header = random_vector(rng, 48);
  const auto payload = random_vector(rng, 384);
  const auto out = mux(header, payload);
  REQUIRE(out.size() == 432);
  for (std::size_t i = 0; i < 48; ++i) CHECK(out[i] == header[i]);
  for (std::size_t i = 0; i < 384; ++i) CHECK(out[48 + i] == payload[i]);

  const auto short_header = random_vector(rng, 47);
  CHECK_THROWS_AS(mux(short_header, payload), SimError);
}

TEST_CASE("carrier allocation matches the subcarrier plan") {
  const auto& plan = CarrierPlan::ieee80211a();
  Xoshiro256 rng = Xoshiro256::seeded(3);
  const auto syms = random_vector(rng, 432);
  const auto vectors = allocate_carriers(syms, plan, sync_word_a(),
                                         sync_word_b());
  REQUIRE(vectors.size() == 11);
  CHECK(vectors[0] == sync_word_a());
  CHECK(vectors[1] == sync_word_b());

  std::size_t consumed = 0;
  for (std::size_t v = 2; v < 11; ++v) {
    // Nulls: 12 zero entries at the null labels and DC.
    for (int label : plan.null_labels) {
      CHECK(vectors[v][CarrierPlan::label_to_bin(label)] == cfloat(0.f, 0.f));
    }
    // Pilots.
    for (std::size_t i = 0; i < plan.pilot_labels.size(); ++i) {
      CHECK(vectors[v][CarrierPlan::label_to_bin(plan.pilot_labels[i])] ==
            plan.pilot_values[i]);
    }
    CHECK(vectors[v][CarrierPlan::label_to_bin(-21)] == cfloat(1.f, 0.f));
    // Data in ascending label order.
    for (int label : plan.data_labels) {
      CHECK(vectors[v][CarrierPlan::label_to_bin(label)] == syms[consumed]);
      ++consumed;
    }
  }
  CHECK(consumed == 432);

  CHECK_THROWS_AS(allocate_carriers(random_vector(rng, 431), plan,
                                    sync_word_a(), sync_word_b()),
                  SimError);
}

TEST_CASE("carrier plan partitions the 64 labels exactly") {
  const auto& plan = CarrierPlan::ieee80211a();
  std::array<int, 64> seen{};
  for (int label : plan.data_labels) ++seen[CarrierPlan::label_to_bin(label)];
  for (int label : plan.pilot_labels) ++seen[CarrierPlan::label_to_bin(label)];
  for (int label : plan.null_labels) ++seen[CarrierPlan::label_to_bin(label)];
  for (int count : seen) CHECK(count == 1);
  CHECK(plan.data_labels.size() == 48);
  CHECK(plan.pilot_labels == std::array<int, 4>{-21, -7, 7, 21});
  CHECK(plan.null_labels[6] == 0);  // DC is null
}

TEST_CASE("ifft64 analytic cases and oracle comparison") {
  std::vector<cfloat> zeros(64, cfloat(0.f, 0.f));
  const auto out_zero = ifft64(zeros);
  for (const auto& s : out_zero) CHECK(std::abs(s) == 0.f);

  std::vector<cfloat> impulse(64, cfloat(0.f, 0.f));
  impulse[0] = cfloat(8.f, 0.f);
  const auto out_const = ifft64(impulse);
  for (const auto& s : out_const) {
    CHECK(s.real() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(s.imag()) < 1e-6);
  }

  Xoshiro256 rng = Xoshiro256::seeded(4);
  for (int t = 0; t < 50; ++t) {
    const auto x = random_vector(rng, 64);
    const auto fast = ifft64(x);
    const auto slow = oracles::naive_dft(x, /*inverse=*/true);
    for (std::size_t i = 0; i < 64; ++i) {
      CHECK(std::abs(std::complex<double>(fast[i].real(), fast[i].imag()) -
                     slow[i]) < 1e-5);
    }
  }

  CHECK_THROWS_AS(ifft64(random_vector(rng, 63)), SimError);
}

TEST_CASE("transform is unitary and invertible") {
  Xoshiro256 rng = Xoshiro256::seeded(5);
  for (int t = 0; t < 1000; ++t) {
    const auto x = random_vector(rng, 64);
    const auto freq = ifft64(x);
    CHECK(std::abs(std::sqrt(energy(freq)) - std::sqrt(energy(x))) <
          1e-6 * std::sqrt(energy(x)) + 1e-9);
    const auto back = fft64(freq);
    CHECK(max_abs_err(back, x) < 1e-6);
  }
}

TEST_CASE("cyclic prefix copies the symbol tail") {
  Xoshiro256 rng = Xoshiro256::seeded(6);
  const auto sym = random_vector(rng, 64);
  const auto out = add_cp(sym);
  REQUIRE(out.size() == 80);
  for (std::size_t i = 0; i < 16; ++i) CHECK(out[i] == sym[48 + i]);
  for (std::size_t i = 0; i < 64; ++i) CHECK(out[16 + i] == sym[i]);
  CHECK_THROWS_AS(add_cp(random_vector(rng, 63)), SimError);
}

TEST_CASE("gain scales samples and energy") {
  Xoshiro256 rng = Xoshiro256::seeded(7);
  IqBuffer buf;
  buf.samples = random_vector(rng, 256);

  const auto same = apply_gain(buf, 1.0);
  CHECK(max_abs_err(same.samples, buf.samples) == 0.0);

  IqBuffer unit;
  unit.samples = {cfloat(1.f, 0.f)};
  const auto scaled = apply_gain(unit, 0.02);
  CHECK(scaled.samples[0].real() == doctest::Approx(0.02f));
  CHECK(scaled.samples[0].imag() == 0.f);

  const auto g = apply_gain(buf, 0.5);
  CHECK(energy(g.samples) ==
        doctest::Approx(0.25 * energy(buf.samples)).epsilon(1e-6));

  CHECK_THROWS_AS(apply_gain(buf, 0.0), SimError);
  CHECK_THROWS_AS(apply_gain(buf, -1.0), SimError);
}

TEST_CASE("full transmit chain sizes and determinism") {
  Xoshiro256 rng = Xoshiro256::seeded(8);
  TaggedPayload p;
  rng.fill(p.bytes);
  const auto& plan = CarrierPlan::ieee80211a();

  const auto qpsk = transmit_frame(p, Modulation::Qpsk, plan, 0.02);
  CHECK(qpsk.samples.size() == 880);  // 11 symbols of 80
  CHECK(qpsk.samples.size() % 80 == 0);
  CHECK(frame_sample_count(Modulation::Qpsk) == 880);

  const auto bpsk = transmit_frame(p, Modulation::Bpsk, plan, 0.02);
  CHECK(bpsk.samples.size() == 1520);  // one bit per symbol needs 19 symbols
  CHECK(frame_sample_count(Modulation::Bpsk) == 1520);

  const auto again = transmit_frame(p, Modulation::Qpsk, plan, 0.02);
  CHECK(max_abs_err(qpsk.samples, again.samples) == 0.0);
}

TEST_CASE("every emitted symbol keeps the CP property") {
  Xoshiro256 rng = Xoshiro256::seeded(9);
  TaggedPayload p;
  rng.fill(p.bytes);
  const auto tx = transmit_frame(p, Modulation::Qpsk,
                                 CarrierPlan::ieee80211a(), 0.02);
  for (std::size_t sym = 0; sym < tx.samples.size() / 80; ++sym) {
    const auto* s = tx.samples.data() + 80 * sym;
    for (std::size_t i = 0; i < 16; ++i) {
      CHECK(s[i] == s[64 + i]);
    }
  }
}

TEST_CASE("sync word A repeats with period 32 in the time domain") {
  const auto time = ifft64(sync_word_a());
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(std::abs(time[i] - time[i + 32]) < 1e-6);
  }
}

}  // TEST_SUITE
