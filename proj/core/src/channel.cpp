#include "lwlink/channel.hpp"

#include <cmath>
#include <complex>

#include "lwlink/errors.hpp"
#include "lwlink/rng.hpp"

namespace lwlink::channel {

namespace {
constexpr double kPi = 3.14159265358979323846;
using cdouble = std::complex<double>;
}  // namespace

IqBuffer awgn(const IqBuffer& buf, double snr_db, std::uint64_t seed) {
  if (buf.samples.empty()) {
    fail(Errc::empty_buffer, "awgn needs a non-empty buffer");
  }
  if (std::isinf(snr_db) && snr_db > 0) return buf;

  double signal_power = 0.0;
  for (const cfloat& s : buf.samples) {
    signal_power += std::norm(cdouble(s.real(), s.imag()));
  }
  signal_power /= static_cast<double>(buf.samples.size());

  const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
  const double component_sigma = std::sqrt(noise_power / 2.0);

  IqBuffer out;
  out.sample_rate_hz = buf.sample_rate_hz;
  out.samples.reserve(buf.samples.size());
  for (std::size_t n = 0; n < buf.samples.size(); ++n) {
    const auto [g1, g2] = counter_gaussian_pair(seed, n);
    out.samples.push_back(
        buf.samples[n] +
        cfloat(static_cast<float>(component_sigma * g1),
               static_cast<float>(component_sigma * g2)));
  }
  return out;
}

IqBuffer apply_cfo(const IqBuffer& buf, double frac) {
  IqBuffer out;
  out.sample_rate_hz = buf.sample_rate_hz;
  out.samples.reserve(buf.samples.size());
  for (std::size_t n = 0; n < buf.samples.size(); ++n) {
    const cdouble rot =
        std::polar(1.0, 2.0 * kPi * frac * static_cast<double>(n) / 64.0);
    const cdouble s = cdouble(buf.samples[n].real(), buf.samples[n].imag()) * rot;
    out.samples.push_back(cfloat(static_cast<float>(s.real()),
                                 static_cast<float>(s.imag())));
  }
  return out;
}

IqBuffer multipath(const IqBuffer& buf, std::span<const ChannelTap> taps) {
  if (taps.empty()) {
    fail(Errc::empty_buffer, "multipath needs at least one tap");
  }
  for (const ChannelTap& tap : taps) {
    if (tap.delay < 0 ||
        static_cast<std::size_t>(tap.delay) >= buf.samples.size()) {
      fail(Errc::delay_too_large,
           "tap delay " + std::to_string(tap.delay) +
               " outside buffer of " + std::to_string(buf.samples.size()));
    }
  }
  IqBuffer out;
  out.sample_rate_hz = buf.sample_rate_hz;
  out.samples.assign(buf.samples.size(), cfloat(0.f, 0.f));
  for (const ChannelTap& tap : taps) {
    const cdouble g(tap.gain.real(), tap.gain.imag());
    for (std::size_t n = tap.delay; n < buf.samples.size(); ++n) {
      const cfloat& x = buf.samples[n - tap.delay];
      const cdouble y = g * cdouble(x.real(), x.imag());
      out.samples[n] += cfloat(static_cast<float>(y.real()),
                               static_cast<float>(y.imag()));
    }
  }
  return out;
}

IqBuffer apply_channel(const IqBuffer& buf, const ChannelConfig& config) {
  IqBuffer out = multipath(buf, config.taps);
  if (config.cfo_fraction != 0.0) out = apply_cfo(out, config.cfo_fraction);
  out = awgn(out, config.snr_db, config.seed);
  return out;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double theoretical_ber_mpsk(int m, double ebn0_db) {
  if (m < 2 || (m & (m - 1)) != 0) {
    fail(Errc::invalid_modulation_order, "M must be a power of two >= 2");
  }
  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  if (m == 2) {
    return q_function(std::sqrt(2.0 * ebn0));
  }
  const double k = std::log2(static_cast<double>(m));
  return (2.0 / k) *
         q_function(std::sqrt(2.0 * ebn0 * k) * std::sin(kPi / m));
}

}  // namespace lwlink::channel
