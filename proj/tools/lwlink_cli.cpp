// Command-line front end: scenario-driven handshake and data-phase runs,
// BER sweeps, timing reports, AEAD vector checks and modem loopback.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lwlink/kat.hpp"
#include "lwlink/link_runner.hpp"
#include "lwlink/perf_model.hpp"
#include "lwlink/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitHandshakeFailed = 2;
constexpr int kExitDecodeFailed = 3;
constexpr int kExitConfigError = 4;

using namespace lwlink;

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) fail(Errc::parse_error, "cannot write " + path);
  out << text;
}

void write_iq(const std::string& path, const std::vector<ofdm::cfloat>& iq) {
  ofdm::IqBuffer buf;
  buf.samples = iq;
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  ofdm::write_iq_file(path, buf);
}

void warn_gain(double gain) {
  if (gain < 0.01 || gain > 0.03) {
    std::cerr << "warning: gain " << gain
              << " is outside the usual 0.01..0.03 range\n";
  }
}

sim::Scenario load_scenario(const std::string& path, std::uint64_t* seed_override) {
  sim::Scenario s = sim::Scenario::parse_file(path);
  if (seed_override) s.seed = *seed_override;
  return s;
}

int emit_timing_report(const sim::Scenario& s, bool to_stdout, bool json_stdout) {
  if (s.reports.timing_fixture.empty()) return kExitOk;
  const auto table = perf::CycleCostTable::load_csv(s.reports.timing_fixture);
  std::vector<perf::HandshakeTimingRow> times;
  if (!s.reports.handshake_times.empty()) {
    times = perf::load_handshake_times(s.reports.handshake_times);
  }
  const auto report = perf::build_report(table, times);
  if (!s.reports.timing_report_json.empty()) {
    write_text_file(s.reports.timing_report_json,
                    perf::format_report_json(report) + "\n");
  }
  if (!s.reports.timing_report_text.empty()) {
    write_text_file(s.reports.timing_report_text,
                    perf::format_report_text(report));
  }
  if (to_stdout) {
    std::cout << (json_stdout ? perf::format_report_json(report) + "\n"
                              : perf::format_report_text(report));
  }
  return kExitOk;
}

int cmd_handshake(const std::string& scenario_path,
                  std::optional<std::uint64_t> seed, bool json,
                  const std::string& iq_out_flag,
                  const std::string& fixture_flag,
                  const std::string& times_flag) {
  sim::Scenario s = load_scenario(scenario_path, seed ? &*seed : nullptr);
  if (!iq_out_flag.empty()) s.reports.iq_out = iq_out_flag;
  if (!fixture_flag.empty()) s.reports.timing_fixture = fixture_flag;
  if (!times_flag.empty()) s.reports.handshake_times = times_flag;
  warn_gain(s.gain);

  const auto outcome = sim::run_handshake(s);
  if (!s.reports.transcript.empty()) {
    write_text_file(s.reports.transcript,
                    sim::transcript_to_jsonl(outcome.transcript));
  }
  if (!s.reports.iq_out.empty()) write_iq(s.reports.iq_out, outcome.iq);
  emit_timing_report(s, /*to_stdout=*/!s.reports.timing_fixture.empty() &&
                            s.reports.timing_report_text.empty() &&
                            s.reports.timing_report_json.empty(),
                     /*json_stdout=*/false);

  if (json) {
    std::printf(
        "{\"ok\":%s,\"frames\":%zu,\"air_time_s\":%.6f,\"failure\":\"%s\"}\n",
        outcome.ok ? "true" : "false", outcome.transcript.size(),
        outcome.air_time_s, outcome.failure.c_str());
  } else if (outcome.ok) {
    std::printf("handshake complete: %zu frames, %.3f s simulated air time\n",
                outcome.transcript.size(), outcome.air_time_s);
  } else {
    std::printf("handshake FAILED: %s (%s)\n", outcome.failure.c_str(),
                errc_name(outcome.failure_code));
  }
  return outcome.ok ? kExitOk : kExitHandshakeFailed;
}

int cmd_data(const std::string& scenario_path, std::optional<std::uint64_t> seed,
             std::optional<int> records, bool json) {
  sim::Scenario s = load_scenario(scenario_path, seed ? &*seed : nullptr);
  if (records) s.data_phase.n_records = *records;
  warn_gain(s.gain);

  auto outcome = sim::run_handshake(s);
  if (!outcome.ok) {
    std::printf("handshake FAILED before data phase: %s\n",
                outcome.failure.c_str());
    return kExitHandshakeFailed;
  }
  const auto stats = sim::run_data_phase(s, outcome);
  if (!s.reports.transcript.empty()) {
    auto all = outcome.transcript;
    all.insert(all.end(), stats.transcript.begin(), stats.transcript.end());
    write_text_file(s.reports.transcript, sim::transcript_to_jsonl(all));
  }
  if (!s.reports.iq_out.empty()) {
    auto iq = outcome.iq;
    iq.insert(iq.end(), stats.iq.begin(), stats.iq.end());
    write_iq(s.reports.iq_out, iq);
  }
  const double ber = stats.payload_bits
                         ? static_cast<double>(stats.payload_bit_errors) /
                               static_cast<double>(stats.payload_bits)
                         : 0.0;
  if (json) {
    std::printf(
        "{\"sent\":%d,\"delivered\":%d,\"auth_failures\":%d,"
        "\"decode_failures\":%d,\"replays\":%d,\"plaintext_ber\":%.8g}\n",
        stats.sent, stats.delivered, stats.auth_failures,
        stats.decode_failures, stats.replays, ber);
  } else {
    std::printf(
        "data phase: sent %d, delivered %d, auth failures %d, decode "
        "failures %d, replays %d, plaintext BER %.3g\n",
        stats.sent, stats.delivered, stats.auth_failures,
        stats.decode_failures, stats.replays, ber);
  }
  if (stats.decode_failures > 0 && stats.delivered == 0) {
    return kExitDecodeFailed;
  }
  return kExitOk;
}

int cmd_ber_sweep(const std::string& modulation, const std::string& snr_spec,
                  std::uint64_t bits_per_point, std::uint64_t seed,
                  const std::string& out_path, const std::string& report_path) {
  const auto mod = ofdm::modulation_from_name(modulation);
  std::vector<double> snrs;
  std::stringstream list(snr_spec);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (!item.empty()) snrs.push_back(std::stod(item));
  }
  if (snrs.empty()) fail(Errc::parse_error, "empty SNR list");
  if (bits_per_point < 100000) {
    fail(Errc::parse_error, "bits per point must be at least 1e5");
  }

  const auto points = sim::run_ber_sweep(mod, snrs, bits_per_point, seed);
  const std::string csv = sim::ber_points_to_csv(points);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text_file(out_path, csv);
  }
  if (!report_path.empty()) {
    std::ostringstream detail;
    detail << "snr_db,trials,bit_errors,ber\n";
    char buf[128];
    for (const auto& p : points) {
      std::snprintf(buf, sizeof(buf), "%.6g,%llu,%llu,%.8g\n", p.snr_db,
                    static_cast<unsigned long long>(p.bits),
                    static_cast<unsigned long long>(p.bit_errors), p.sim_ber);
      detail << buf;
    }
    write_text_file(report_path, detail.str());
  }
  return kExitOk;
}

int cmd_timing_report(const std::string& fixture, const std::string& times,
                      const std::string& json_out, const std::string& text_out,
                      bool json_stdout) {
  sim::Scenario s;
  s.reports.timing_fixture = fixture;
  s.reports.handshake_times = times;
  s.reports.timing_report_json = json_out;
  s.reports.timing_report_text = text_out;
  return emit_timing_report(s, /*to_stdout=*/true, json_stdout);
}

int cmd_aead_kat(const std::string& file, const std::string& scheme_str,
                 bool generate, std::uint64_t seed) {
  const Scheme scheme = scheme_from_name(scheme_str);
  if (generate) {
    const auto records = crypto::generate_kat(scheme, seed);
    crypto::save_kat_file(file, records,
                          std::string("AEAD vectors, suite ") +
                              scheme_name(scheme));
    std::printf("wrote %zu vectors to %s\n", records.size(), file.c_str());
    return kExitOk;
  }
  const auto records = crypto::load_kat_file(file);
  const auto result = crypto::verify_kat(records, scheme);
  std::printf("%zu/%zu vectors ok\n", result.total - result.failed,
              result.total);
  for (std::size_t idx : result.failed_indices) {
    std::printf("  vector %zu FAILED\n", idx);
  }
  return result.failed == 0 ? kExitOk : kExitDecodeFailed;
}

// Decode frames from a previously written IQ capture.
int cmd_decode_iq(const std::string& path, const std::string& modulation) {
  const auto mod = ofdm::modulation_from_name(modulation);
  const auto& plan = ofdm::CarrierPlan::ieee80211a();
  const ofdm::IqBuffer capture = ofdm::read_iq_file(path);
  std::size_t cursor = 0;
  int decoded_count = 0;
  while (cursor + ofdm::frame_sample_count(mod) <= capture.samples.size()) {
    ofdm::IqBuffer window;
    window.samples.assign(capture.samples.begin() + cursor,
                          capture.samples.end());
    const auto decoded = ofdm::receive_frame(window, mod, plan);
    if (!decoded) break;
    ++decoded_count;
    std::printf("frame %d: index %u, header %s\n", decoded_count,
                decoded->frame_index, decoded->header_ok ? "ok" : "bad");
    cursor += decoded->sync.frame_start + ofdm::frame_sample_count(mod);
  }
  std::printf("decoded %d frame(s) from %s\n", decoded_count, path.c_str());
  return decoded_count > 0 ? kExitOk : kExitDecodeFailed;
}

int cmd_loopback(int frames, const std::string& modulation, double gain,
                 std::uint64_t seed, const std::string& iq_out,
                 const std::string& ber_report) {
  const auto mod = ofdm::modulation_from_name(modulation);
  warn_gain(gain);
  const auto& plan = ofdm::CarrierPlan::ieee80211a();
  Xoshiro256 rng = Xoshiro256::from_bytes(derive_seed(seed, 0x100b));

  std::vector<ofdm::cfloat> all_iq;
  std::uint64_t bits = 0, errors = 0;
  int exact = 0;
  for (int f = 0; f < frames; ++f) {
    ofdm::TaggedPayload payload;
    payload.frame_index = static_cast<std::uint32_t>(f);
    rng.fill(payload.bytes);
    const auto tx = ofdm::transmit_frame(payload, mod, plan, gain);
    all_iq.insert(all_iq.end(), tx.samples.begin(), tx.samples.end());
    const auto decoded = ofdm::receive_frame(tx, mod, plan);
    bits += 8 * ofdm::kPayloadBytes;
    if (!decoded) {
      errors += 8 * ofdm::kPayloadBytes;
      continue;
    }
    std::uint64_t frame_errors = 0;
    for (std::size_t b = 0; b < ofdm::kPayloadBytes; ++b) {
      frame_errors += std::popcount(
          static_cast<unsigned>(payload.bytes[b] ^ decoded->payload[b]));
    }
    errors += frame_errors;
    if (frame_errors == 0) ++exact;
  }
  if (!iq_out.empty()) write_iq(iq_out, all_iq);
  if (!ber_report.empty()) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "snr_db,trials,bit_errors,ber\ninf,%llu,%llu,%.8g\n",
                  static_cast<unsigned long long>(bits),
                  static_cast<unsigned long long>(errors),
                  bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0);
    write_text_file(ber_report, buf);
  }
  std::printf("loopback: %d/%d frames exact, BER %.3g\n", exact, frames,
              bits ? static_cast<double>(errors) / static_cast<double>(bits)
                   : 0.0);
  return exact == frames ? kExitOk : kExitDecodeFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightweight-cipher WiFi handshake simulator over an 802.11a "
               "OFDM baseband link"};
  app.require_subcommand(0, 1);

  std::string root_kat_file, root_kat_scheme = "Reference";
  app.add_option("--aead-kat", root_kat_file,
                 "verify an AEAD test-vector file and exit");
  app.add_option("--aead-kat-scheme", root_kat_scheme,
                 "suite for --aead-kat (Reference|SPIX|ACE|WAGE)");

  // handshake
  auto* hs = app.add_subcommand("handshake",
                                "run the 4-way handshake over the modeled link");
  std::string hs_scenario;
  std::string hs_iq_out, hs_fixture, hs_times;
  std::uint64_t hs_seed = 0;
  bool hs_seed_set = false, hs_json = false;
  hs->add_option("--scenario", hs_scenario, "scenario file")->required();
  hs->add_option("--iq-out", hs_iq_out, "write transmitted IQ samples here");
  hs->add_option("--timing-fixture", hs_fixture,
                 "cycle-count CSV; prints the timing report after the run");
  hs->add_option("--handshake-times", hs_times, "handshake air-time CSV");
  hs->add_option("--seed", hs_seed, "override the scenario seed")
      ->each([&](const std::string&) { hs_seed_set = true; });
  hs->add_flag("--json", hs_json, "machine-readable result line");

  // data
  auto* data = app.add_subcommand("data",
                                  "handshake, then protected data records");
  std::string data_scenario;
  std::uint64_t data_seed = 0;
  bool data_seed_set = false, data_json = false;
  int data_records = -1;
  data->add_option("--scenario", data_scenario, "scenario file")->required();
  data->add_option("--records", data_records, "override data.n_records");
  data->add_option("--seed", data_seed, "override the scenario seed")
      ->each([&](const std::string&) { data_seed_set = true; });
  data->add_flag("--json", data_json, "machine-readable result line");

  // ber-sweep
  auto* sweep = app.add_subcommand("ber-sweep",
                                   "Monte Carlo BER curve vs the analytic one");
  std::string sweep_mod = "bpsk", sweep_snrs, sweep_out, sweep_report;
  std::uint64_t sweep_bits = 1000000, sweep_seed = 1;
  sweep->add_option("--modulation", sweep_mod, "bpsk|qpsk");
  sweep->add_option("--snr", sweep_snrs, "comma-separated SNR list in dB")
      ->required();
  sweep->add_option("--bits-per-point", sweep_bits, "bits per SNR point (>=1e5)");
  sweep->add_option("--seed", sweep_seed, "sweep seed");
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");
  sweep->add_option("--ber-report", sweep_report,
                    "detail CSV (snr_db,trials,bit_errors,ber)");

  // timing-report
  auto* timing = app.add_subcommand("timing-report",
                                    "recompute the timing tables from the "
                                    "cycle-count fixture");
  std::string timing_fixture, timing_times, timing_json_out, timing_text_out;
  bool timing_json_stdout = false;
  timing->add_option("--timing-fixture", timing_fixture, "cycle-count CSV")
      ->required();
  timing->add_option("--handshake-times", timing_times,
                     "handshake air-time CSV");
  timing->add_option("--json-out", timing_json_out, "write JSON report here");
  timing->add_option("--text-out", timing_text_out, "write text report here");
  timing->add_flag("--json", timing_json_stdout, "print JSON to stdout");

  // aead-kat
  auto* kat = app.add_subcommand("aead-kat", "verify or generate AEAD vectors");
  std::string kat_file, kat_scheme = "Reference";
  bool kat_generate = false;
  std::uint64_t kat_seed = 0x4b41542d'534545ULL;
  kat->add_option("--file", kat_file, "vector file")->required();
  kat->add_option("--scheme", kat_scheme, "Reference|SPIX|ACE|WAGE");
  kat->add_flag("--generate", kat_generate, "write vectors instead of checking");
  kat->add_option("--seed", kat_seed, "generation seed");

  // loopback
  auto* loop = app.add_subcommand("loopback",
                                  "TX->RX over an identity channel");
  int loop_frames = 10;
  std::string loop_mod = "qpsk", loop_iq_out, loop_ber_report, loop_iq_in;
  double loop_gain = 0.02;
  std::uint64_t loop_seed = 1;
  loop->add_option("--frames", loop_frames, "number of random 96-byte frames");
  loop->add_option("--iq-in", loop_iq_in,
                   "decode frames from an IQ capture instead of generating");
  loop->add_option("--modulation", loop_mod, "bpsk|qpsk");
  loop->add_option("--gain", loop_gain, "transmit gain");
  loop->add_option("--seed", loop_seed, "payload seed");
  loop->add_option("--iq-out", loop_iq_out, "write IQ samples here");
  loop->add_option("--ber-report", loop_ber_report, "BER detail CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!root_kat_file.empty()) {
      return cmd_aead_kat(root_kat_file, root_kat_scheme, false, 0);
    }
    if (hs->parsed()) {
      return cmd_handshake(hs_scenario,
                           hs_seed_set ? std::optional<std::uint64_t>(hs_seed)
                                       : std::nullopt,
                           hs_json, hs_iq_out, hs_fixture, hs_times);
    }
    if (data->parsed()) {
      return cmd_data(data_scenario,
                      data_seed_set ? std::optional<std::uint64_t>(data_seed)
                                    : std::nullopt,
                      data_records >= 0 ? std::optional<int>(data_records)
                                        : std::nullopt,
                      data_json);
    }
    if (sweep->parsed()) {
      return cmd_ber_sweep(sweep_mod, sweep_snrs, sweep_bits, sweep_seed,
                           sweep_out, sweep_report);
    }
    if (timing->parsed()) {
      return cmd_timing_report(timing_fixture, timing_times, timing_json_out,
                               timing_text_out, timing_json_stdout);
    }
    if (kat->parsed()) {
      return cmd_aead_kat(kat_file, kat_scheme, kat_generate, kat_seed);
    }
    if (loop->parsed()) {
      if (!loop_iq_in.empty()) {
        return cmd_decode_iq(loop_iq_in, loop_mod);
      }
      return cmd_loopback(loop_frames, loop_mod, loop_gain, loop_seed,
                          loop_iq_out, loop_ber_report);
    }
    std::cout << app.help();
    return kExitOk;
  } catch (const lwlink::SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case lwlink::Errc::parse_error:
      case lwlink::Errc::missing_entry:
        return kExitConfigError;
      default:
        return kExitDecodeFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
