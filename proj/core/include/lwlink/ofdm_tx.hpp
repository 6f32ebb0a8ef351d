#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lwlink/carrier_plan.hpp"
#include "lwlink/common.hpp"
#include "lwlink/sync_words.hpp"

namespace lwlink::ofdm {

enum class Modulation { Bpsk, Qpsk };

const char* modulation_name(Modulation m);
Modulation modulation_from_name(const std::string& name);
unsigned bits_per_symbol(Modulation m);

// One 96-byte unit of the tagged stream.
struct TaggedPayload {
  std::array<std::uint8_t, 96> bytes{};
  std::uint32_t frame_index = 0;
};

constexpr std::size_t kPayloadBytes = 96;
constexpr std::size_t kHeaderBytes = 48;
constexpr std::size_t kCpLen = 16;
constexpr std::size_t kSymbolLen = 64;
constexpr std::size_t kSymbolWithCp = kSymbolLen + kCpLen;

// Complex baseband samples, 32-bit float per component.
struct IqBuffer {
  std::vector<cfloat> samples;
  double sample_rate_hz = 20e6;
};

void write_iq_file(const std::string& path, const IqBuffer& buf);
IqBuffer read_iq_file(const std::string& path, double sample_rate_hz = 20e6);

// Splits (zero-padding to a multiple of 96) into consecutive tagged units.
std::vector<TaggedPayload> tag_stream(std::span<const std::uint8_t> data);

// 48 header bytes, one bit per byte, BPSK-ready: payload length (12 bits),
// frame index mod 4096 (12 bits), CRC-8 over those 24 bits, zero fill.
std::array<std::uint8_t, 48> generate_header(const TaggedPayload& payload);

struct HeaderFields {
  std::uint16_t payload_len = 0;
  std::uint16_t frame_index = 0;
};
// Decodes and CRC-checks a demodulated header; nullopt when the CRC fails.
std::optional<HeaderFields> decode_header(
    std::span<const std::uint8_t> header_bits);

std::uint8_t crc8(std::span<const std::uint8_t> data);

// Byte -> four 2-bit values, least-significant pair first.
std::array<std::uint8_t, 4> repack_bits(std::uint8_t byte);

// Byte -> eight single bits, least-significant first (BPSK payload path).
std::array<std::uint8_t, 8> unpack_to_bits(std::uint8_t byte);

cfloat map_bpsk(std::uint8_t b);
cfloat map_qpsk(std::uint8_t b);

// Header-first concatenation; lengths are fixed at 48 + 384.
std::vector<cfloat> mux(std::span<const cfloat> header_syms,
                        std::span<const cfloat> payload_syms);

// Places 432 symbols (one header symbol + eight payload symbols worth) plus
// the two sync words into 11 frequency-domain vectors of 64 entries.
std::vector<std::array<cfloat, 64>> allocate_carriers(
    std::span<const cfloat> syms, const CarrierPlan& plan,
    const std::array<cfloat, 64>& sync_a, const std::array<cfloat, 64>& sync_b);

std::vector<cfloat> add_cp(std::span<const cfloat> symbol);

IqBuffer apply_gain(const IqBuffer& buf, double gain);

// Full send chain for one tagged payload. QPSK frames span 11 OFDM symbols
// (880 samples); BPSK payloads need twice the data symbols, 19 in total.
IqBuffer transmit_frame(const TaggedPayload& payload, Modulation modulation,
                        const CarrierPlan& plan, double gain);

std::size_t frame_symbol_count(Modulation m);   // 11 or 19
std::size_t frame_sample_count(Modulation m);   // 880 or 1520

}  // namespace lwlink::ofdm
