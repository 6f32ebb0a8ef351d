#pragma once

#include <optional>
#include <string>

#include "lwlink/channel.hpp"
#include "lwlink/common.hpp"
#include "lwlink/ofdm_tx.hpp"

namespace lwlink::sim {

struct DataPhaseConfig {
  int ad_blocks = 0;   // 0 or 2
  int msg_blocks = 16;
  int n_records = 0;
};

struct ReportPaths {
  std::string transcript;
  std::string iq_out;
  std::string ber_report;
  std::string timing_fixture;
  std::string handshake_times;
  std::string timing_report_json;
  std::string timing_report_text;
};

// Scenario files are flat key=value text under [section] headers; '#' starts
// a comment. Unknown keys are rejected so typos fail loudly.
struct Scenario {
  Scheme scheme = Scheme::Reference;
  ofdm::Modulation modulation = ofdm::Modulation::Qpsk;
  channel::ChannelConfig channel;
  Block16 pmk{};
  MacAddr ap_mac{};
  MacAddr sta_mac{};
  std::uint64_t seed = 1;
  std::optional<Block16> replay_counter_base;  // derived from seed if absent
  double gain = 0.02;
  double frame_rate_bps = 16.82e3;
  double detection_floor = 0.45;
  DataPhaseConfig data_phase;
  ReportPaths reports;

  Block16 effective_replay_base() const;

  static Scenario parse(const std::string& text, const std::string& origin);
  static Scenario parse_file(const std::string& path);
};

}  // namespace lwlink::sim
