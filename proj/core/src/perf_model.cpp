#include "lwlink/perf_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lwlink/errors.hpp"

namespace lwlink::perf {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    fail(Errc::non_positive_input, std::string(what) + " must be positive");
  }
}

}  // namespace

CycleCostTable CycleCostTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open fixture " + path);
  CycleCostTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column names line
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 9) {
      fail(Errc::parse_error, "fixture row needs 9 columns: " + line);
    }
    CycleCostEntry e;
    e.scheme = f[0];
    e.platform = f[1];
    e.function = f[2];
    e.cycles = std::stoull(f[3]);
    e.sram_bytes = static_cast<std::uint32_t>(std::stoul(f[4]));
    e.flash_bytes = static_cast<std::uint32_t>(std::stoul(f[5]));
    e.m_bits = static_cast<std::uint32_t>(std::stoul(f[6]));
    e.golden_throughput_kbps = std::stod(f[7]);
    e.golden_gentime_ms = std::stod(f[8]);
    if (e.cycles == 0) {
      fail(Errc::parse_error, "cycle count must be positive: " + line);
    }
    table.rows.push_back(std::move(e));
  }
  return table;
}

const CycleCostEntry* CycleCostTable::find(const std::string& scheme,
                                           const std::string& platform,
                                           const std::string& function) const {
  for (const auto& row : rows) {
    if (row.scheme == scheme && row.platform == platform &&
        row.function == function) {
      return &row;
    }
  }
  return nullptr;
}

std::vector<HandshakeTimingRow> load_handshake_times(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open timing file " + path);
  std::vector<HandshakeTimingRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 4) {
      fail(Errc::parse_error, "timing row needs 4 columns: " + line);
    }
    rows.push_back(HandshakeTimingRow{f[0], f[1], std::stod(f[2]),
                                      std::stod(f[3])});
  }
  return rows;
}

double throughput_kbps(std::uint64_t m_bits, std::uint64_t cycles,
                       double f_hz) {
  check_positive(static_cast<double>(m_bits), "message bits");
  check_positive(static_cast<double>(cycles), "cycle count");
  check_positive(f_hz, "clock frequency");
  return static_cast<double>(m_bits) /
         (static_cast<double>(cycles) / f_hz) / 1000.0;
}

double gen_time_ms(std::uint64_t cycles, double f_hz) {
  check_positive(static_cast<double>(cycles), "cycle count");
  check_positive(f_hz, "clock frequency");
  return 1000.0 * static_cast<double>(cycles) / f_hz;
}

double auth_time_ms(double t_4way_tx_s, double t_kdf_ms, double t_mic_ms) {
  check_positive(t_4way_tx_s, "air time");
  check_positive(t_kdf_ms, "key derivation time");
  check_positive(t_mic_ms, "tag generation time");
  return 1000.0 * t_4way_tx_s + 2.0 * t_kdf_ms + 3.0 * t_mic_ms;
}

double scale_tx_time(double t_s, double measured_rate_bps,
                     double target_rate_bps) {
  check_positive(t_s, "air time");
  check_positive(measured_rate_bps, "measured rate");
  check_positive(target_rate_bps, "target rate");
  return t_s * measured_rate_bps / target_rate_bps;
}

double simulated_tx_time(std::uint64_t bytes, double frame_rate_bps) {
  check_positive(static_cast<double>(bytes), "byte count");
  check_positive(frame_rate_bps, "frame rate");
  return 8.0 * static_cast<double>(bytes) / frame_rate_bps;
}

// 96 payload + 48 header bytes expanded by the frozen air constant 23/9.
// With that constant a 4-frame handshake occupies 4 * 144 * 23/9 = 1472
// byte-times - one radio frame - i.e. 0.70 s at the 16.82 Kbps link rate.
double frame_air_bytes() { return (96.0 + 48.0) * 23.0 / 9.0; }

double handshake_tx_time_s(int n_frames, double frame_rate_bps) {
  check_positive(static_cast<double>(n_frames), "frame count");
  check_positive(frame_rate_bps, "frame rate");
  return 8.0 * n_frames * frame_air_bytes() / frame_rate_bps;
}

TimingReport build_report(const CycleCostTable& table,
                          const std::vector<HandshakeTimingRow>& handshake,
                          double target_rate_bps) {
  TimingReport report;
  report.target_rate_bps = target_rate_bps;
  report.modeled_4way_tx_s = handshake_tx_time_s(4, report.measured_rate_bps);
  for (const auto& row : table.rows) {
    ReportRow r;
    r.entry = row;
    r.computed_throughput_kbps = throughput_kbps(row.m_bits, row.cycles,
                                                 row.f_hz);
    r.computed_gentime_ms = gen_time_ms(row.cycles, row.f_hz);
    r.throughput_ok = std::abs(r.computed_throughput_kbps -
                               row.golden_throughput_kbps) <= report.tolerance;
    r.gentime_ok = std::abs(r.computed_gentime_ms - row.golden_gentime_ms) <=
                   report.tolerance;
    if (!r.throughput_ok) ++report.mismatches;
    if (!r.gentime_ok) ++report.mismatches;
    report.rows.push_back(std::move(r));
  }
  for (const auto& hs : handshake) {
    const CycleCostEntry* kdf = table.find(hs.scheme, hs.platform, "KDF");
    const CycleCostEntry* mic = table.find(hs.scheme, hs.platform, "MIC");
    if (!kdf || !mic) {
      fail(Errc::missing_entry,
           "fixture lacks KDF/MIC rows for " + hs.scheme + "/" + hs.platform);
    }
    AuthRow a;
    a.scheme = hs.scheme;
    a.platform = hs.platform;
    a.tx_time_s = hs.tx_time_s;
    a.kdf_ms = gen_time_ms(kdf->cycles, kdf->f_hz);
    a.mic_ms = gen_time_ms(mic->cycles, mic->f_hz);
    a.computed_auth_ms = auth_time_ms(hs.tx_time_s, a.kdf_ms, a.mic_ms);
    a.golden_auth_ms = hs.golden_auth_ms;
    a.scaled_tx_ms = 1000.0 * scale_tx_time(hs.tx_time_s,
                                            report.measured_rate_bps,
                                            target_rate_bps);
    a.scaled_auth_ms = a.scaled_tx_ms + 2.0 * a.kdf_ms + 3.0 * a.mic_ms;
    a.auth_ok =
        std::abs(a.computed_auth_ms - a.golden_auth_ms) <= report.tolerance;
    if (!a.auth_ok) ++report.mismatches;
    report.auth_rows.push_back(std::move(a));
  }
  return report;
}

std::string format_report_text(const TimingReport& report) {
  std::ostringstream out;
  char buf[256];
  out << "function timing (recomputed from cycle counts)\n";
  std::snprintf(buf, sizeof(buf), "%-6s %-12s %-10s %10s %10s %10s %9s %9s %s\n",
                "scheme", "platform", "function", "cycles", "thr[Kbps]",
                "gold[Kbps]", "gen[ms]", "gold[ms]", "ok");
  out << buf;
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf),
                  "%-6s %-12s %-10s %10llu %10.2f %10.2f %9.2f %9.2f %s\n",
                  r.entry.scheme.c_str(), r.entry.platform.c_str(),
                  r.entry.function.c_str(),
                  static_cast<unsigned long long>(r.entry.cycles),
                  r.computed_throughput_kbps, r.entry.golden_throughput_kbps,
                  r.computed_gentime_ms, r.entry.golden_gentime_ms,
                  r.throughput_ok && r.gentime_ok ? "ok" : "MISMATCH");
    out << buf;
  }
  out << "\n4-way handshake totals\n";
  std::snprintf(buf, sizeof(buf), "%-6s %-12s %8s %9s %9s %12s %12s %14s %s\n",
                "scheme", "platform", "tx[s]", "kdf[ms]", "mic[ms]",
                "auth[ms]", "golden[ms]", "scaled[ms]", "ok");
  out << buf;
  for (const auto& a : report.auth_rows) {
    std::snprintf(buf, sizeof(buf),
                  "%-6s %-12s %8.2f %9.2f %9.2f %12.2f %12.2f %14.2f %s\n",
                  a.scheme.c_str(), a.platform.c_str(), a.tx_time_s, a.kdf_ms,
                  a.mic_ms, a.computed_auth_ms, a.golden_auth_ms,
                  a.scaled_auth_ms, a.auth_ok ? "ok" : "MISMATCH");
    out << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "\nscaled columns: air time rescaled to %.4g bps; modeled "
                "4-way air time %.3f s\nmismatches: %zu (tolerance %.2f)\n",
                report.target_rate_bps, report.modeled_4way_tx_s,
                report.mismatches, report.tolerance);
  out << buf;
  return out.str();
}

std::string format_report_json(const TimingReport& report) {
  nlohmann::json j;
  j["tolerance"] = report.tolerance;
  j["mismatches"] = report.mismatches;
  j["measured_rate_bps"] = report.measured_rate_bps;
  j["target_rate_bps"] = report.target_rate_bps;
  j["modeled_4way_tx_s"] = report.modeled_4way_tx_s;
  j["functions"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    j["functions"].push_back({
        {"scheme", r.entry.scheme},
        {"platform", r.entry.platform},
        {"function", r.entry.function},
        {"cycles", r.entry.cycles},
        {"sram_bytes", r.entry.sram_bytes},
        {"flash_bytes", r.entry.flash_bytes},
        {"m_bits", r.entry.m_bits},
        {"throughput_kbps", r.computed_throughput_kbps},
        {"golden_throughput_kbps", r.entry.golden_throughput_kbps},
        {"gen_time_ms", r.computed_gentime_ms},
        {"golden_gentime_ms", r.entry.golden_gentime_ms},
        {"throughput_ok", r.throughput_ok},
        {"gentime_ok", r.gentime_ok},
    });
  }
  j["handshake"] = nlohmann::json::array();
  for (const auto& a : report.auth_rows) {
    j["handshake"].push_back({
        {"scheme", a.scheme},
        {"platform", a.platform},
        {"tx_time_s", a.tx_time_s},
        {"kdf_ms", a.kdf_ms},
        {"mic_ms", a.mic_ms},
        {"auth_time_ms", a.computed_auth_ms},
        {"golden_auth_ms", a.golden_auth_ms},
        {"scaled_tx_ms", a.scaled_tx_ms},
        {"scaled_auth_ms", a.scaled_auth_ms},
        {"auth_ok", a.auth_ok},
    });
  }
  return j.dump(2);
}

}  // namespace lwlink::perf
