#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lwlink::perf {

// One row of the cycle-count fixture. Cycle counts, memory numbers and the
// golden derived columns are data transcribed from microcontroller
// measurements; this module's job is to reproduce the derived columns from
// the cycles column by pure arithmetic.
struct CycleCostEntry {
  std::string scheme;    // SPIX | ACE | WAGE
  std::string platform;  // ATmega128 | MSP430F2013 | MSP430F2370 | LM3S9D96
  std::string function;  // Perm | KDF | MIC | AE_a_m | Hash_m_j
  std::uint64_t cycles = 0;
  std::uint32_t sram_bytes = 0;
  std::uint32_t flash_bytes = 0;
  std::uint32_t m_bits = 0;  // message size the throughput row refers to
  double golden_throughput_kbps = 0.0;
  double golden_gentime_ms = 0.0;
  double f_hz = 16e6;
};

struct CycleCostTable {
  std::vector<CycleCostEntry> rows;

  static CycleCostTable load_csv(const std::string& path);
  const CycleCostEntry* find(const std::string& scheme,
                             const std::string& platform,
                             const std::string& function) const;
};

// Observed air times and golden totals for the handshake, one row per
// (scheme, platform).
struct HandshakeTimingRow {
  std::string scheme;
  std::string platform;
  double tx_time_s = 0.0;
  double golden_auth_ms = 0.0;
};

std::vector<HandshakeTimingRow> load_handshake_times(const std::string& path);

// Throughput in Kbps for m_bits pushed through `cycles` clock cycles at
// frequency f_hz.
double throughput_kbps(std::uint64_t m_bits, std::uint64_t cycles, double f_hz);

// One function invocation in milliseconds.
double gen_time_ms(std::uint64_t cycles, double f_hz);

// Total mutual-authentication time: air time plus two key derivations and
// three integrity tags.
double auth_time_ms(double t_4way_tx_s, double t_kdf_ms, double t_mic_ms);

// Rescales an observed air time from the measured link rate to a target
// rate. Returns seconds.
double scale_tx_time(double t_s, double measured_rate_bps,
                     double target_rate_bps);

// Air time for a byte count at the given frame rate, in seconds.
double simulated_tx_time(std::uint64_t bytes, double frame_rate_bps);

// Effective on-air bytes for one 96-byte frame (payload + header, scaled by
// the frozen link expansion constant 23/9; four handshake frames then cost
// exactly one 1472-byte radio frame).
double frame_air_bytes();
double handshake_tx_time_s(int n_frames, double frame_rate_bps);

struct ReportRow {
  CycleCostEntry entry;
  double computed_throughput_kbps = 0.0;
  double computed_gentime_ms = 0.0;
  bool throughput_ok = false;
  bool gentime_ok = false;
};

struct AuthRow {
  std::string scheme;
  std::string platform;
  double tx_time_s = 0.0;
  double kdf_ms = 0.0;
  double mic_ms = 0.0;
  double computed_auth_ms = 0.0;
  double golden_auth_ms = 0.0;
  // Same total with the air time rescaled to the target link rate.
  double scaled_tx_ms = 0.0;
  double scaled_auth_ms = 0.0;
  bool auth_ok = false;
};

struct TimingReport {
  std::vector<ReportRow> rows;
  std::vector<AuthRow> auth_rows;
  double tolerance = 0.05;
  std::size_t mismatches = 0;
  double measured_rate_bps = 16.82e3;
  double target_rate_bps = 50e6;
  double modeled_4way_tx_s = 0.0;  // air-time model for the 4-frame exchange
};

// Recomputes every derived column from the cycles column and compares it to
// the golden values; requires a KDF and a MIC fixture row for every
// handshake timing row. Scaled columns rescale the observed air time from
// the measured link rate to target_rate_bps.
TimingReport build_report(const CycleCostTable& table,
                          const std::vector<HandshakeTimingRow>& handshake,
                          double target_rate_bps = 50e6);

std::string format_report_text(const TimingReport& report);
std::string format_report_json(const TimingReport& report);

}  // namespace lwlink::perf
