#include "lwlink/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "lwlink/errors.hpp"
#include "lwlink/rng.hpp"

namespace lwlink::sim {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  try {
    return std::stod(v);
  } catch (...) {
    fail(Errc::parse_error, "bad numeric value for " + key);
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    return std::stoull(v);
  } catch (...) {
    fail(Errc::parse_error, "bad integer value for " + key);
  }
}

Block16 parse_block16(const std::string& v, const std::string& key) {
  const Bytes raw = from_hex(v);
  if (raw.size() != 16) {
    fail(Errc::parse_error, key + " must be 16 hex bytes");
  }
  Block16 out;
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

MacAddr parse_mac(const std::string& v, const std::string& key) {
  const Bytes raw = from_hex(v);
  if (raw.size() != 6) {
    fail(Errc::parse_error, key + " must be 6 hex bytes");
  }
  MacAddr out;
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

// "delay:re:im, delay:re:im, ..."
std::vector<channel::ChannelTap> parse_taps(const std::string& v) {
  std::vector<channel::ChannelTap> taps;
  std::istringstream list(v);
  std::string item;
  while (std::getline(list, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::istringstream fields(item);
    std::string delay, re, im;
    if (!std::getline(fields, delay, ':') || !std::getline(fields, re, ':') ||
        !std::getline(fields, im, ':')) {
      fail(Errc::parse_error, "tap must be delay:re:im, got '" + item + "'");
    }
    channel::ChannelTap tap;
    tap.delay = static_cast<int>(parse_u64(trim(delay), "tap delay"));
    tap.gain = ofdm::cfloat(static_cast<float>(parse_double(trim(re), "tap")),
                            static_cast<float>(parse_double(trim(im), "tap")));
    taps.push_back(tap);
  }
  if (taps.empty()) fail(Errc::parse_error, "taps list is empty");
  return taps;
}

}  // namespace

Block16 Scenario::effective_replay_base() const {
  if (replay_counter_base) return *replay_counter_base;
  // Fresh sessions get fresh counters so recorded frames never replay.
  Block16 base{};
  Xoshiro256 rng = Xoshiro256::from_bytes(derive_seed(seed, 0x72637472));
  base = rng.next_block16();
  base[0] &= 0x7F;  // keep room to count upward
  return base;
}

Scenario Scenario::parse(const std::string& text, const std::string& origin) {
  Scenario s;
  std::istringstream in(text);
  std::string line;
  std::string section = "session";
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(Errc::parse_error, origin + ":" + std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "session.scheme") {
      s.scheme = scheme_from_name(value);
    } else if (qual == "session.modulation") {
      s.modulation = ofdm::modulation_from_name(value);
    } else if (qual == "session.pmk") {
      s.pmk = parse_block16(value, key);
    } else if (qual == "session.ap_mac") {
      s.ap_mac = parse_mac(value, key);
    } else if (qual == "session.sta_mac") {
      s.sta_mac = parse_mac(value, key);
    } else if (qual == "session.seed") {
      s.seed = parse_u64(value, key);
    } else if (qual == "session.replay_counter_base") {
      s.replay_counter_base = parse_block16(value, key);
    } else if (qual == "session.gain") {
      s.gain = parse_double(value, key);
    } else if (qual == "session.frame_rate_bps") {
      s.frame_rate_bps = parse_double(value, key);
    } else if (qual == "session.detection_floor") {
      s.detection_floor = parse_double(value, key);
    } else if (qual == "channel.snr_db") {
      s.channel.snr_db = parse_double(value, key);
    } else if (qual == "channel.cfo_fraction") {
      s.channel.cfo_fraction = parse_double(value, key);
    } else if (qual == "channel.taps") {
      s.channel.taps = parse_taps(value);
    } else if (qual == "channel.noise_seed") {
      s.channel.seed = parse_u64(value, key);
    } else if (qual == "data.ad_blocks") {
      const auto blocks = parse_u64(value, key);
      if (blocks != 0 && blocks != 2) {
        fail(Errc::parse_error, "data.ad_blocks must be 0 or 2");
      }
      s.data_phase.ad_blocks = static_cast<int>(blocks);
    } else if (qual == "data.n_records") {
      s.data_phase.n_records = static_cast<int>(parse_u64(value, key));
    } else if (qual == "reports.transcript") {
      s.reports.transcript = value;
    } else if (qual == "reports.iq_out") {
      s.reports.iq_out = value;
    } else if (qual == "reports.ber_report") {
      s.reports.ber_report = value;
    } else if (qual == "reports.timing_fixture") {
      s.reports.timing_fixture = value;
    } else if (qual == "reports.handshake_times") {
      s.reports.handshake_times = value;
    } else if (qual == "reports.timing_report_json") {
      s.reports.timing_report_json = value;
    } else if (qual == "reports.timing_report_text") {
      s.reports.timing_report_text = value;
    } else {
      fail(Errc::parse_error,
           origin + ":" + std::to_string(line_no) + ": unknown key " + qual);
    }
  }
  return s;
}

Scenario Scenario::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open scenario " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path);
}

}  // namespace lwlink::sim
