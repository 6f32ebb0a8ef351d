#include "lwlink/ofdm_tx.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lwlink/errors.hpp"
#include "lwlink/fft.hpp"

namespace lwlink::ofdm {

const char* modulation_name(Modulation m) {
  return m == Modulation::Bpsk ? "BPSK" : "QPSK";
}

Modulation modulation_from_name(const std::string& name) {
  if (name == "BPSK" || name == "bpsk") return Modulation::Bpsk;
  if (name == "QPSK" || name == "qpsk") return Modulation::Qpsk;
  fail(Errc::parse_error, "unknown modulation '" + name + "'");
}

unsigned bits_per_symbol(Modulation m) {
  return m == Modulation::Bpsk ? 1 : 2;
}

void write_iq_file(const std::string& path, const IqBuffer& buf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::parse_error, "cannot write IQ file " + path);
  for (const cfloat& s : buf.samples) {
    const float re = s.real();
    const float im = s.imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof(float));
    out.write(reinterpret_cast<const char*>(&im), sizeof(float));
  }
}

IqBuffer read_iq_file(const std::string& path, double sample_rate_hz) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::parse_error, "cannot read IQ file " + path);
  IqBuffer buf;
  buf.sample_rate_hz = sample_rate_hz;
  float pair[2];
  while (in.read(reinterpret_cast<char*>(pair), sizeof(pair))) {
    buf.samples.emplace_back(pair[0], pair[1]);
  }
  return buf;
}

std::vector<TaggedPayload> tag_stream(std::span<const std::uint8_t> data) {
  std::vector<TaggedPayload> out;
  const std::size_t n_frames = (data.size() + kPayloadBytes - 1) / kPayloadBytes;
  out.resize(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    TaggedPayload& p = out[f];
    p.frame_index = static_cast<std::uint32_t>(f);
    const std::size_t off = f * kPayloadBytes;
    const std::size_t take = std::min(kPayloadBytes, data.size() - off);
    std::copy(data.begin() + off, data.begin() + off + take, p.bytes.begin());
  }
  return out;
}

std::uint8_t crc8(std::span<const std::uint8_t> data) {
  // CRC-8, polynomial 0x07, init 0, no reflection.
  static const auto table = [] {
    std::array<std::uint8_t, 256> t{};
    for (unsigned i = 0; i < 256; ++i) {
      std::uint8_t crc = static_cast<std::uint8_t>(i);
      for (int bit = 0; bit < 8; ++bit) {
        crc = (crc & 0x80) ? static_cast<std::uint8_t>((crc << 1) ^ 0x07)
                           : static_cast<std::uint8_t>(crc << 1);
      }
      t[i] = crc;
    }
    return t;
  }();
  std::uint8_t crc = 0;
  for (std::uint8_t b : data) crc = table[crc ^ b];
  return crc;
}

namespace {

// Header bit layout (LSB-first within each field):
//   bits  0..11  payload length
//   bits 12..23  frame index mod 4096
//   bits 24..31  CRC-8 over the three bytes packing bits 0..23
//   bits 32..47  zero
std::array<std::uint8_t, 3> pack_header_fields(std::uint16_t len,
                                               std::uint16_t idx) {
  return {static_cast<std::uint8_t>(len & 0xFF),
          static_cast<std::uint8_t>(((len >> 8) & 0x0F) | ((idx & 0x0F) << 4)),
          static_cast<std::uint8_t>((idx >> 4) & 0xFF)};
}

}  // namespace

std::array<std::uint8_t, 48> generate_header(const TaggedPayload& payload) {
  const std::uint16_t len = static_cast<std::uint16_t>(kPayloadBytes);
  const std::uint16_t idx = static_cast<std::uint16_t>(payload.frame_index % 4096);
  const auto packed = pack_header_fields(len, idx);
  const std::uint8_t crc = crc8(packed);

  std::array<std::uint8_t, 48> bits{};
  for (int i = 0; i < 12; ++i) bits[i] = (len >> i) & 1;
  for (int i = 0; i < 12; ++i) bits[12 + i] = (idx >> i) & 1;
  for (int i = 0; i < 8; ++i) bits[24 + i] = (crc >> i) & 1;
  return bits;
}

std::optional<HeaderFields> decode_header(
    std::span<const std::uint8_t> header_bits) {
  if (header_bits.size() != 48) {
    fail(Errc::length_mismatch, "header must be 48 bits");
  }
  std::uint16_t len = 0, idx = 0;
  std::uint8_t crc = 0;
  for (int i = 0; i < 12; ++i) len |= static_cast<std::uint16_t>(header_bits[i] & 1) << i;
  for (int i = 0; i < 12; ++i) idx |= static_cast<std::uint16_t>(header_bits[12 + i] & 1) << i;
  for (int i = 0; i < 8; ++i) crc |= static_cast<std::uint8_t>(header_bits[24 + i] & 1) << i;
  for (std::size_t i = 32; i < 48; ++i) {
    if (header_bits[i] & 1) return std::nullopt;
  }
  if (crc8(pack_header_fields(len, idx)) != crc) return std::nullopt;
  return HeaderFields{len, idx};
}

std::array<std::uint8_t, 4> repack_bits(std::uint8_t byte) {
  return {static_cast<std::uint8_t>(byte & 0x3),
          static_cast<std::uint8_t>((byte >> 2) & 0x3),
          static_cast<std::uint8_t>((byte >> 4) & 0x3),
          static_cast<std::uint8_t>((byte >> 6) & 0x3)};
}

std::array<std::uint8_t, 8> unpack_to_bits(std::uint8_t byte) {
  std::array<std::uint8_t, 8> bits;
  for (int i = 0; i < 8; ++i) bits[i] = (byte >> i) & 1;
  return bits;
}

cfloat map_bpsk(std::uint8_t b) {
  if (b > 1) {
    fail(Errc::invalid_symbol, "BPSK input must be 0x00 or 0x01");
  }
  return b ? cfloat(1.f, 0.f) : cfloat(-1.f, 0.f);
}

cfloat map_qpsk(std::uint8_t b) {
  if (b > 3) {
    fail(Errc::invalid_symbol, "QPSK input must be in 0x00..0x03");
  }
  constexpr float a = 0.70710678118654752440f;
  const float re = (b & 1) ? a : -a;
  const float im = (b & 2) ? a : -a;
  return {re, im};
}

std::vector<cfloat> mux(std::span<const cfloat> header_syms,
                        std::span<const cfloat> payload_syms) {
  if (header_syms.size() != 48 || payload_syms.size() != 384) {
    fail(Errc::length_mismatch, "mux expects 48 header + 384 payload symbols");
  }
  std::vector<cfloat> out;
  out.reserve(432);
  out.insert(out.end(), header_syms.begin(), header_syms.end());
  out.insert(out.end(), payload_syms.begin(), payload_syms.end());
  return out;
}

namespace {

std::array<cfloat, 64> fill_data_symbol(std::span<const cfloat> data48,
                                        const CarrierPlan& plan) {
  std::array<cfloat, 64> vec{};
  for (std::size_t i = 0; i < plan.data_labels.size(); ++i) {
    vec[CarrierPlan::label_to_bin(plan.data_labels[i])] = data48[i];
  }
  for (std::size_t i = 0; i < plan.pilot_labels.size(); ++i) {
    vec[CarrierPlan::label_to_bin(plan.pilot_labels[i])] = plan.pilot_values[i];
  }
  return vec;
}

std::vector<std::array<cfloat, 64>> allocate_any(
    std::span<const cfloat> syms, const CarrierPlan& plan,
    const std::array<cfloat, 64>& sync_a,
    const std::array<cfloat, 64>& sync_b) {
  if (syms.size() % 48 != 0) {
    fail(Errc::length_mismatch,
         "carrier allocation needs a multiple of 48 symbols");
  }
  std::vector<std::array<cfloat, 64>> vectors;
  vectors.reserve(2 + syms.size() / 48);
  vectors.push_back(sync_a);
  vectors.push_back(sync_b);
  for (std::size_t off = 0; off < syms.size(); off += 48) {
    vectors.push_back(fill_data_symbol(syms.subspan(off, 48), plan));
  }
  return vectors;
}

}  // namespace

std::vector<std::array<cfloat, 64>> allocate_carriers(
    std::span<const cfloat> syms, const CarrierPlan& plan,
    const std::array<cfloat, 64>& sync_a,
    const std::array<cfloat, 64>& sync_b) {
  if (syms.size() != 432) {
    fail(Errc::length_mismatch, "carrier allocator expects 432 symbols");
  }
  return allocate_any(syms, plan, sync_a, sync_b);
}

std::vector<cfloat> add_cp(std::span<const cfloat> symbol) {
  if (symbol.size() != kSymbolLen) {
    fail(Errc::length_mismatch, "cyclic prefix insertion expects 64 samples");
  }
  std::vector<cfloat> out;
  out.reserve(kSymbolWithCp);
  out.insert(out.end(), symbol.begin() + 48, symbol.end());
  out.insert(out.end(), symbol.begin(), symbol.end());
  return out;
}

IqBuffer apply_gain(const IqBuffer& buf, double gain) {
  if (!(gain > 0.0)) {
    fail(Errc::non_positive_gain, "gain must be positive");
  }
  IqBuffer out;
  out.sample_rate_hz = buf.sample_rate_hz;
  out.samples.reserve(buf.samples.size());
  const float g = static_cast<float>(gain);
  for (const cfloat& s : buf.samples) out.samples.push_back(s * g);
  return out;
}

std::size_t frame_symbol_count(Modulation m) {
  const std::size_t payload_syms = kPayloadBytes * 8 / bits_per_symbol(m);
  return 2 + 1 + payload_syms / 48;
}

std::size_t frame_sample_count(Modulation m) {
  return frame_symbol_count(m) * kSymbolWithCp;
}

IqBuffer transmit_frame(const TaggedPayload& payload, Modulation modulation,
                        const CarrierPlan& plan, double gain) {
  // Header: 48 bits, always BPSK, one OFDM symbol.
  const auto header_bits = generate_header(payload);
  std::vector<cfloat> header_syms;
  header_syms.reserve(48);
  for (std::uint8_t bit : header_bits) header_syms.push_back(map_bpsk(bit));

  // Payload: repack to the modulation's symbol alphabet.
  std::vector<cfloat> payload_syms;
  if (modulation == Modulation::Qpsk) {
    payload_syms.reserve(384);
    for (std::uint8_t byte : payload.bytes) {
      for (std::uint8_t q : repack_bits(byte)) {
        payload_syms.push_back(map_qpsk(q));
      }
    }
  } else {
    payload_syms.reserve(768);
    for (std::uint8_t byte : payload.bytes) {
      for (std::uint8_t bit : unpack_to_bits(byte)) {
        payload_syms.push_back(map_bpsk(bit));
      }
    }
  }

  std::vector<cfloat> all_syms;
  if (modulation == Modulation::Qpsk) {
    all_syms = mux(header_syms, payload_syms);
  } else {
    all_syms.reserve(header_syms.size() + payload_syms.size());
    all_syms.insert(all_syms.end(), header_syms.begin(), header_syms.end());
    all_syms.insert(all_syms.end(), payload_syms.begin(), payload_syms.end());
  }

  const auto vectors =
      allocate_any(all_syms, plan, sync_word_a(), sync_word_b());

  IqBuffer buf;
  buf.samples.reserve(vectors.size() * kSymbolWithCp);
  for (const auto& vec : vectors) {
    const auto time = ifft64(vec);
    const auto with_cp = add_cp(time);
    buf.samples.insert(buf.samples.end(), with_cp.begin(), with_cp.end());
  }
  return apply_gain(buf, gain);
}

}  // namespace lwlink::ofdm
