#include "lwlink/ofdm_rx.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>

#include "lwlink/errors.hpp"
#include "lwlink/fft.hpp"

namespace lwlink::ofdm {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cdouble = std::complex<double>;

cdouble to_cd(const cfloat& s) { return {s.real(), s.imag()}; }

}  // namespace

std::optional<SyncResult> schmidl_sync(const IqBuffer& rx,
                                       double detection_floor,
                                       double plateau_fraction) {
  const auto& r = rx.samples;
  const std::size_t half = 32;
  if (r.size() < 2 * half) return std::nullopt;
  const std::size_t n_positions = r.size() - 2 * half + 1;

  // Sliding lag-32 correlation and second-half energy.
  std::vector<double> metric(n_positions, 0.0);
  std::vector<cdouble> corr(n_positions);
  cdouble p{};
  double energy = 0.0;
  for (std::size_t m = 0; m < half; ++m) {
    p += std::conj(to_cd(r[m])) * to_cd(r[m + half]);
    energy += std::norm(to_cd(r[m + half]));
  }
  for (std::size_t d = 0;; ++d) {
    corr[d] = p;
    metric[d] = energy > 1e-30 ? std::norm(p) / (energy * energy) : 0.0;
    if (d + 1 >= n_positions) break;
    p -= std::conj(to_cd(r[d])) * to_cd(r[d + half]);
    p += std::conj(to_cd(r[d + half])) * to_cd(r[d + 2 * half]);
    energy -= std::norm(to_cd(r[d + half]));
    energy += std::norm(to_cd(r[d + 2 * half]));
  }

  // Lock to the earliest frame: first crossing of the detection floor, then
  // the local plateau peak within one symbol of it.
  std::size_t first = 0;
  while (first < n_positions && metric[first] < detection_floor) ++first;
  if (first == n_positions) return std::nullopt;
  const std::size_t search_end = std::min(n_positions, first + 96);
  const auto peak_it =
      std::max_element(metric.begin() + first, metric.begin() + search_end);
  const double peak = *peak_it;
  const std::size_t peak_pos =
      static_cast<std::size_t>(peak_it - metric.begin());

  // Contiguous run around the peak above the relative plateau level; its
  // midpoint sits half a CP past the true frame start.
  const double run_level = plateau_fraction * peak;
  std::size_t lo = peak_pos;
  while (lo > 0 && metric[lo - 1] >= run_level) --lo;
  std::size_t hi = peak_pos;
  while (hi + 1 < n_positions && metric[hi + 1] >= run_level) ++hi;
  const std::size_t mid = (lo + hi) / 2;
  const std::size_t start = mid >= kCpLen / 2 ? mid - kCpLen / 2 : 0;

  SyncResult result;
  result.frame_start = start;
  result.metric_peak = std::min(1.0, peak);
  result.cfo_estimate = std::arg(corr[peak_pos]) / kPi;
  return result;
}

std::vector<cfloat> remove_cp(std::span<const cfloat> symbol_with_cp) {
  if (symbol_with_cp.size() != kSymbolWithCp) {
    fail(Errc::length_mismatch, "cyclic prefix removal expects 80 samples");
  }
  return {symbol_with_cp.begin() + kCpLen, symbol_with_cp.end()};
}

std::pair<std::vector<cfloat>, ChannelEstimate> equalize(
    std::span<const cfloat> symbol_freq, const CarrierPlan& plan) {
  if (symbol_freq.size() != kSymbolLen) {
    fail(Errc::length_mismatch, "equalizer expects a 64-entry symbol");
  }
  ChannelEstimate est;
  std::array<cdouble, 4> pilot_gain;
  for (std::size_t i = 0; i < plan.pilot_labels.size(); ++i) {
    const cfloat measured =
        symbol_freq[CarrierPlan::label_to_bin(plan.pilot_labels[i])];
    est.source_pilots[i] = measured;
    if (std::abs(to_cd(measured)) < 1e-12) {
      fail(Errc::zero_pilot, "pilot subcarrier vanished; symbol unequalizable");
    }
    pilot_gain[i] = to_cd(measured) / to_cd(plan.pilot_values[i]);
  }

  // Complex-linear interpolation over label order, flat beyond the outermost
  // pilots.
  auto gain_at = [&](int label) -> cdouble {
    if (label <= plan.pilot_labels.front()) return pilot_gain.front();
    if (label >= plan.pilot_labels.back()) return pilot_gain.back();
    std::size_t seg = 0;
    while (label > plan.pilot_labels[seg + 1]) ++seg;
    const double span =
        static_cast<double>(plan.pilot_labels[seg + 1] - plan.pilot_labels[seg]);
    const double t = (label - plan.pilot_labels[seg]) / span;
    return pilot_gain[seg] * (1.0 - t) + pilot_gain[seg + 1] * t;
  };

  std::vector<cfloat> data;
  data.reserve(plan.data_labels.size());
  for (std::size_t i = 0; i < plan.data_labels.size(); ++i) {
    const int label = plan.data_labels[i];
    const cdouble h = gain_at(label);
    est.gains[CarrierPlan::label_to_bin(label)] =
        cfloat(static_cast<float>(h.real()), static_cast<float>(h.imag()));
    const cdouble y = to_cd(symbol_freq[CarrierPlan::label_to_bin(label)]);
    const cdouble x = y / h;
    data.push_back(cfloat(static_cast<float>(x.real()),
                          static_cast<float>(x.imag())));
  }
  return {std::move(data), est};
}

std::uint8_t demap(cfloat symbol, Modulation modulation) {
  if (modulation == Modulation::Bpsk) {
    return symbol.real() > 0.f ? 0x01 : 0x00;
  }
  std::uint8_t b = 0;
  if (symbol.real() > 0.f) b |= 1;
  if (symbol.imag() > 0.f) b |= 2;
  return b;
}

std::uint8_t unpack_bits(std::span<const std::uint8_t> quads) {
  if (quads.size() != 4) {
    fail(Errc::length_mismatch, "unpack expects four 2-bit values");
  }
  std::uint8_t byte = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (quads[i] > 3) {
      fail(Errc::invalid_symbol, "2-bit value out of range");
    }
    byte |= static_cast<std::uint8_t>(quads[i] << (2 * i));
  }
  return byte;
}

namespace {

// Per-bin gains measured against the known sounding word (second sync
// symbol). Returns gains on active bins, zeros elsewhere.
std::array<cfloat, 64> estimate_from_sounding(
    std::span<const cfloat> sounding_freq) {
  const auto& ref = sync_word_b();
  std::array<cfloat, 64> gains{};
  for (int label = -26; label <= 26; ++label) {
    if (label == 0) continue;
    const std::size_t bin = CarrierPlan::label_to_bin(label);
    const cdouble x = to_cd(ref[bin]);
    if (std::abs(x) < 1e-12) continue;
    const cdouble h = to_cd(sounding_freq[bin]) / x;
    gains[bin] = cfloat(static_cast<float>(h.real()),
                        static_cast<float>(h.imag()));
  }
  return gains;
}

std::vector<cfloat> symbol_at(const IqBuffer& rx, std::size_t start,
                              std::size_t index, double cfo) {
  std::vector<cfloat> body(kSymbolLen);
  const std::size_t base = start + index * kSymbolWithCp + kCpLen;
  for (std::size_t i = 0; i < kSymbolLen; ++i) {
    cdouble s = to_cd(rx.samples[base + i]);
    if (cfo != 0.0) {
      const double n = static_cast<double>(base + i);
      s *= std::polar(1.0, -2.0 * kPi * cfo * n / 64.0);
    }
    body[i] = cfloat(static_cast<float>(s.real()),
                     static_cast<float>(s.imag()));
  }
  return body;
}

}  // namespace

std::optional<std::array<cfloat, 64>> sounding_estimate(
    const IqBuffer& rx, std::size_t frame_start) {
  if (frame_start + 2 * kSymbolWithCp > rx.samples.size()) return std::nullopt;
  const auto body = symbol_at(rx, frame_start, 1, 0.0);
  const auto freq = fft64(body);
  return estimate_from_sounding(freq);
}

std::optional<DecodedFrame> receive_frame(const IqBuffer& rx,
                                          Modulation modulation,
                                          const CarrierPlan& plan,
                                          const ReceiveOptions& opts) {
  DecodedFrame frame;
  std::size_t start = 0;
  double cfo = 0.0;
  if (opts.known_start) {
    start = *opts.known_start;
    frame.sync.frame_start = start;
    frame.sync.metric_peak = 1.0;
  } else {
    auto sync = schmidl_sync(rx, opts.detection_floor);
    if (!sync) return std::nullopt;
    frame.sync = *sync;
    cfo = sync->cfo_estimate;
    const std::size_t backoff = static_cast<std::size_t>(
        std::max(0, opts.timing_backoff));
    start = sync->frame_start > backoff ? sync->frame_start - backoff : 0;
  }

  const std::size_t n_symbols = frame_symbol_count(modulation);
  if (start + n_symbols * kSymbolWithCp > rx.samples.size()) {
    return std::nullopt;
  }

  // Channel gains: supplied, or measured from this frame's sounding symbol.
  std::array<cfloat, 64> gains;
  if (opts.channel_override) {
    gains = *opts.channel_override;
  } else {
    const auto body = symbol_at(rx, start, 1, cfo);
    gains = estimate_from_sounding(fft64(body));
  }

  // FFT of every data-bearing symbol.
  std::vector<std::vector<cfloat>> freq;
  freq.reserve(n_symbols - 2);
  for (std::size_t k = 2; k < n_symbols; ++k) {
    freq.push_back(fft64(symbol_at(rx, start, k, cfo)));
  }

  // One common complex correction from all pilots in the frame.
  cdouble num{};
  double den = 0.0;
  for (const auto& sym : freq) {
    for (std::size_t i = 0; i < plan.pilot_labels.size(); ++i) {
      const std::size_t bin = CarrierPlan::label_to_bin(plan.pilot_labels[i]);
      const cdouble expected = to_cd(gains[bin]) * to_cd(plan.pilot_values[i]);
      num += to_cd(sym[bin]) * std::conj(expected);
      den += std::norm(expected);
    }
  }
  const cdouble common = den > 1e-30 ? num / den : cdouble(1.0, 0.0);
  if (std::abs(common) < 1e-12) return std::nullopt;

  auto equalize_symbol = [&](const std::vector<cfloat>& sym) {
    std::vector<cfloat> data;
    data.reserve(plan.data_labels.size());
    for (int label : plan.data_labels) {
      const std::size_t bin = CarrierPlan::label_to_bin(label);
      const cdouble h = to_cd(gains[bin]) * common;
      if (std::abs(h) < 1e-12) {
        data.push_back(cfloat(0.f, 0.f));
        continue;
      }
      const cdouble x = to_cd(sym[bin]) / h;
      data.push_back(cfloat(static_cast<float>(x.real()),
                            static_cast<float>(x.imag())));
    }
    return data;
  };

  // Header symbol.
  std::vector<std::uint8_t> header_bits;
  header_bits.reserve(48);
  for (const cfloat& s : equalize_symbol(freq[0])) {
    header_bits.push_back(demap(s, Modulation::Bpsk));
  }
  const auto header = decode_header(header_bits);
  if (header && header->payload_len == kPayloadBytes) {
    frame.header_ok = true;
    frame.frame_index = header->frame_index;
  } else if (opts.require_header) {
    return std::nullopt;
  }

  // Payload symbols.
  std::vector<std::uint8_t> units;
  units.reserve((n_symbols - 3) * 48);
  for (std::size_t k = 1; k < freq.size(); ++k) {
    for (const cfloat& s : equalize_symbol(freq[k])) {
      units.push_back(demap(s, modulation));
    }
  }
  if (modulation == Modulation::Qpsk) {
    for (std::size_t i = 0; i < kPayloadBytes; ++i) {
      frame.payload[i] = unpack_bits({&units[4 * i], 4});
    }
  } else {
    for (std::size_t i = 0; i < kPayloadBytes; ++i) {
      std::uint8_t byte = 0;
      for (std::size_t bit = 0; bit < 8; ++bit) {
        byte |= static_cast<std::uint8_t>((units[8 * i + bit] & 1) << bit);
      }
      frame.payload[i] = byte;
    }
  }
  return frame;
}

double compute_ber(std::span<const std::uint8_t> sent,
                   std::span<const std::uint8_t> received) {
  if (sent.size() != received.size()) {
    fail(Errc::length_mismatch, "BER needs equal-length sequences");
  }
  if (sent.empty()) return 0.0;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    errors += std::popcount(static_cast<unsigned>(sent[i] ^ received[i]));
  }
  return static_cast<double>(errors) / (8.0 * static_cast<double>(sent.size()));
}

}  // namespace lwlink::ofdm
