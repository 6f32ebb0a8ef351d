#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lwlink/ofdm_tx.hpp"

namespace lwlink::channel {

using ofdm::cfloat;
using ofdm::IqBuffer;

struct ChannelTap {
  int delay = 0;  // samples
  cfloat gain{1.f, 0.f};
};

struct ChannelConfig {
  double snr_db = std::numeric_limits<double>::infinity();
  double cfo_fraction = 0.0;  // of one subcarrier spacing
  std::vector<ChannelTap> taps = {ChannelTap{}};
  std::uint64_t seed = 0;
};

// Adds circular complex Gaussian noise sized so that
// (measured signal power) / (noise power) = 10^(snr_db/10), averaged over
// the whole buffer. snr_db = +inf passes the buffer through untouched.
// Noise comes from a counter-based generator, so equal seeds give identical
// buffers.
IqBuffer awgn(const IqBuffer& buf, double snr_db, std::uint64_t seed);

// Multiplies sample n by e^{j 2 pi frac n / 64}.
IqBuffer apply_cfo(const IqBuffer& buf, double frac);

// Sparse-tap linear convolution, truncated to the input length.
IqBuffer multipath(const IqBuffer& buf, std::span<const ChannelTap> taps);

IqBuffer apply_channel(const IqBuffer& buf, const ChannelConfig& config);

// M-ary PSK bit error probability. M = 2 uses the exact BPSK expression
// Q(sqrt(2 Eb/N0)); M >= 4 uses the standard approximation
// (2/log2 M) Q(sqrt(2 Eb/N0 log2 M) sin(pi/M)).
double theoretical_ber_mpsk(int m, double ebn0_db);

// Gaussian tail probability.
double q_function(double x);

}  // namespace lwlink::channel
