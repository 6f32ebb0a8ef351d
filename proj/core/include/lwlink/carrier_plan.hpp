#pragma once

#include <array>
#include <complex>

#include "lwlink/fft.hpp"

namespace lwlink::ofdm {

// 64-subcarrier layout: labels -32..31, 48 data carriers, pilots at
// -21/-7/7/21 with BPSK values [1,1,1,-1], nulls on the band edges and DC.
// Data carriers are filled in ascending label order.
struct CarrierPlan {
  int fft_size = 64;
  std::array<int, 48> data_labels{};
  std::array<int, 4> pilot_labels{-21, -7, 7, 21};
  std::array<cfloat, 4> pilot_values{cfloat(1.f, 0.f), cfloat(1.f, 0.f),
                                     cfloat(1.f, 0.f), cfloat(-1.f, 0.f)};
  std::array<int, 12> null_labels{};

  static const CarrierPlan& ieee80211a();

  // Label -32..31 -> FFT bin (negative labels wrap to the upper half).
  static std::size_t label_to_bin(int label) {
    return static_cast<std::size_t>((label + 64) % 64);
  }
};

}  // namespace lwlink::ofdm
