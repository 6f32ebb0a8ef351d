#pragma once

#include <array>

#include "lwlink/carrier_plan.hpp"

namespace lwlink::ofdm {

// Frequency-domain synchronization words, one OFDM symbol each.
//
// Word A carries energy only on the even-labeled data subcarriers (amplitude
// sqrt(2) BPSK so per-symbol power matches a data symbol), which makes its
// time-domain form repeat with period 32 - the structure the timing metric
// correlates on. Word B is a fixed pseudo-random QPSK sequence on all 52
// active labels and doubles as a full-band channel sounding symbol.
const std::array<cfloat, 64>& sync_word_a();
const std::array<cfloat, 64>& sync_word_b();

}  // namespace lwlink::ofdm
