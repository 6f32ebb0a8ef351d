#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lwlink/ofdm_tx.hpp"

namespace lwlink::ofdm {

struct SyncResult {
  std::size_t frame_start = 0;   // index of the first sync symbol's CP
  double cfo_estimate = 0.0;     // fraction of one subcarrier spacing
  double metric_peak = 0.0;      // in [0, 1]
};

struct ChannelEstimate {
  std::array<cfloat, 64> gains{};       // per-bin complex gain (active bins)
  std::array<cfloat, 4> source_pilots{};  // raw pilot measurements
};

// Timing acquisition on the half-repeated sync symbol: normalized lag-32
// autocorrelation metric, plateau midpoint timing, fractional carrier offset
// from the correlation phase. `detection_floor` is the absolute metric a
// peak must reach before a frame is declared; `plateau_fraction` is the
// relative level (default 0.8 of the observed plateau) that bounds the
// timing run.
std::optional<SyncResult> schmidl_sync(const IqBuffer& rx,
                                       double detection_floor = 0.45,
                                       double plateau_fraction = 0.8);

std::vector<cfloat> remove_cp(std::span<const cfloat> symbol_with_cp);

// Per-symbol pilot equalizer: least-squares gains at the four pilot bins,
// complex-linear interpolation across data labels, flat extension at the
// band edges. Returns the 48 equalized data symbols in transmit fill order.
std::pair<std::vector<cfloat>, ChannelEstimate> equalize(
    std::span<const cfloat> symbol_freq, const CarrierPlan& plan);

// Hard decision to the nearest constellation point; ties toward the lower
// byte value.
std::uint8_t demap(cfloat symbol, Modulation modulation);

// Exact inverse of repack_bits.
std::uint8_t unpack_bits(std::span<const std::uint8_t> quads);

struct DecodedFrame {
  std::array<std::uint8_t, 96> payload{};
  bool header_ok = false;
  std::uint16_t frame_index = 0;
  SyncResult sync;
};

struct ReceiveOptions {
  // Skip timing acquisition and decode from this sample index.
  std::optional<std::size_t> known_start;
  // Frequency-domain channel gains to use instead of the per-frame
  // sounding-symbol estimate (e.g. averaged over a static link).
  const std::array<cfloat, 64>* channel_override = nullptr;
  double detection_floor = 0.45;
  // When false, a failed header CRC still yields a frame (header_ok unset)
  // so raw payload error rates can be measured.
  bool require_header = true;
  // Back off the sync timing estimate into the cyclic prefix, which turns a
  // small late-timing error into a harmless cyclic shift.
  int timing_backoff = 4;
};

// Full receive chain: sync, CP removal, FFT, equalization (sounding-symbol
// channel estimate plus a pilot-derived common scalar), demap, bit repack,
// header CRC check. nullopt when no frame is found, the buffer is short, or
// the header CRC fails.
std::optional<DecodedFrame> receive_frame(const IqBuffer& rx,
                                          Modulation modulation,
                                          const CarrierPlan& plan,
                                          const ReceiveOptions& opts = {});

// Frequency-domain gains measured from the sounding symbol of one frame
// located at `frame_start`; used to average channel estimates across frames.
std::optional<std::array<cfloat, 64>> sounding_estimate(
    const IqBuffer& rx, std::size_t frame_start);

// Bit error rate between two equal-length byte sequences.
double compute_ber(std::span<const std::uint8_t> sent,
                   std::span<const std::uint8_t> received);

}  // namespace lwlink::ofdm
