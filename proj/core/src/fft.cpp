#include "lwlink/fft.hpp"

#include <array>
#include <cmath>

#include "lwlink/errors.hpp"

namespace lwlink::ofdm {

namespace {

constexpr std::size_t kN = 64;
constexpr double kPi = 3.14159265358979323846;

using cdouble = std::complex<double>;

struct Tables {
  std::array<std::size_t, kN> bitrev;
  // Twiddles for the forward direction; conjugate gives the inverse.
  std::array<cdouble, kN / 2> twiddle;

  Tables() {
    for (std::size_t i = 0; i < kN; ++i) {
      std::size_t r = 0;
      for (std::size_t bit = 0; bit < 6; ++bit) {
        r = (r << 1) | ((i >> bit) & 1);
      }
      bitrev[i] = r;
    }
    for (std::size_t k = 0; k < kN / 2; ++k) {
      twiddle[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) /
                                       static_cast<double>(kN));
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

std::vector<cfloat> transform(std::span<const cfloat> in, bool inverse) {
  if (in.size() != kN) {
    fail(Errc::length_mismatch,
         "64-point transform got " + std::to_string(in.size()) + " samples");
  }
  const Tables& t = tables();
  std::array<cdouble, kN> buf;
  for (std::size_t i = 0; i < kN; ++i) {
    const cfloat& s = in[t.bitrev[i]];
    buf[i] = cdouble(s.real(), s.imag());
  }
  for (std::size_t len = 2; len <= kN; len <<= 1) {
    const std::size_t stride = kN / len;
    for (std::size_t start = 0; start < kN; start += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        cdouble w = t.twiddle[k * stride];
        if (inverse) w = std::conj(w);
        const cdouble a = buf[start + k];
        const cdouble b = buf[start + k + len / 2] * w;
        buf[start + k] = a + b;
        buf[start + k + len / 2] = a - b;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(kN));
  std::vector<cfloat> out(kN);
  for (std::size_t i = 0; i < kN; ++i) {
    out[i] = cfloat(static_cast<float>(buf[i].real() * scale),
                    static_cast<float>(buf[i].imag() * scale));
  }
  return out;
}

}  // namespace

std::vector<cfloat> fft64(std::span<const cfloat> time_samples) {
  return transform(time_samples, /*inverse=*/false);
}

std::vector<cfloat> ifft64(std::span<const cfloat> freq_samples) {
  return transform(freq_samples, /*inverse=*/true);
}

}  // namespace lwlink::ofdm
