#include "lwlink/sync_words.hpp"

#include <cmath>

namespace lwlink::ofdm {

namespace {

// Fixed sign/phase tables for the two words. Values were drawn once from a
// short LFSR and are frozen here; the exact pattern is arbitrary but must be
// identical on both ends of the link.
constexpr std::array<int, 26> kWordASigns = {
    +1, +1, -1, +1, -1, -1, +1, -1, -1, -1, +1, +1, -1,
    +1, -1, +1, +1, +1, -1, -1, +1, -1, +1, +1, -1, -1};

constexpr std::array<std::uint8_t, 52> kWordBQpsk = {
    2, 0, 3, 1, 1, 2, 0, 0, 3, 2, 1, 3, 0, 2, 2, 1, 3, 0,
    1, 1, 2, 3, 3, 0, 1, 2, 0, 3, 2, 2, 0, 1, 3, 3, 1, 0,
    2, 1, 0, 0, 1, 3, 2, 3, 0, 1, 1, 2, 3, 0, 2, 1};

constexpr double kInvSqrt2 = 0.70710678118654752440;

cfloat qpsk_point(std::uint8_t q) {
  const float re = (q & 1) ? static_cast<float>(kInvSqrt2)
                           : static_cast<float>(-kInvSqrt2);
  const float im = (q & 2) ? static_cast<float>(kInvSqrt2)
                           : static_cast<float>(-kInvSqrt2);
  return {re, im};
}

std::array<cfloat, 64> build_word_a() {
  std::array<cfloat, 64> word{};
  const auto& plan = CarrierPlan::ieee80211a();
  const float amp = static_cast<float>(std::sqrt(2.0));
  std::size_t sign_index = 0;
  for (int label : plan.data_labels) {
    if (label % 2 != 0) continue;
    const float v = amp * static_cast<float>(kWordASigns[sign_index++]);
    word[CarrierPlan::label_to_bin(label)] = cfloat(v, 0.f);
  }
  return word;
}

std::array<cfloat, 64> build_word_b() {
  std::array<cfloat, 64> word{};
  std::size_t idx = 0;
  for (int label = -26; label <= 26; ++label) {
    if (label == 0) continue;
    word[CarrierPlan::label_to_bin(label)] = qpsk_point(kWordBQpsk[idx++]);
  }
  return word;
}

}  // namespace

const std::array<cfloat, 64>& sync_word_a() {
  static const std::array<cfloat, 64> word = build_word_a();
  return word;
}

const std::array<cfloat, 64>& sync_word_b() {
  static const std::array<cfloat, 64> word = build_word_b();
  return word;
}

}  // namespace lwlink::ofdm
