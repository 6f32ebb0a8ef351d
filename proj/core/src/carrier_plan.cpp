#include "lwlink/carrier_plan.hpp"

namespace lwlink::ofdm {

namespace {

CarrierPlan build_ieee80211a() {
  CarrierPlan plan;
  std::size_t d = 0;
  for (int label = -26; label <= 26; ++label) {
    if (label == 0) continue;
    if (label == -21 || label == -7 || label == 7 || label == 21) continue;
    plan.data_labels[d++] = label;
  }
  std::size_t n = 0;
  for (int label = -32; label <= -27; ++label) plan.null_labels[n++] = label;
  plan.null_labels[n++] = 0;
  for (int label = 27; label <= 31; ++label) plan.null_labels[n++] = label;
  return plan;
}

}  // namespace

const CarrierPlan& CarrierPlan::ieee80211a() {
  static const CarrierPlan plan = build_ieee80211a();
  return plan;
}

}  // namespace lwlink::ofdm
