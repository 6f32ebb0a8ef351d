#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lwlink::ofdm {

using cfloat = std::complex<float>;

// Unitary 64-point transforms (1/sqrt(N) scaling in both directions).
// Storage is single-precision to match the IQ sample type; the butterflies
// run in double.
std::vector<cfloat> fft64(std::span<const cfloat> time_samples);
std::vector<cfloat> ifft64(std::span<const cfloat> freq_samples);

}  // namespace lwlink::ofdm
