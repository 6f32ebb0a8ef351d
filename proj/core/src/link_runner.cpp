#include "lwlink/link_runner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lwlink/errors.hpp"
#include "lwlink/perf_model.hpp"
#include "lwlink/rng.hpp"

namespace lwlink::sim {

namespace {

using handshake::Frame;
using handshake::HandshakeMessage;
using handshake::MessageKind;
using handshake::PartyState;
using handshake::Role;
using ofdm::IqBuffer;
using ofdm::Modulation;

constexpr std::size_t kLeadInSamples = 240;
constexpr std::size_t kLeadOutSamples = 80;
constexpr std::size_t kInterFrameGap = 80;

const char* kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::Msg1_ANonce: return "Msg1_ANonce";
    case MessageKind::Msg2_SNonceMicA: return "Msg2_SNonceMicA";
    case MessageKind::Msg3_ANonceMicS: return "Msg3_ANonceMicS";
    case MessageKind::Msg4_MicAll: return "Msg4_MicAll";
  }
  return "?";
}

struct Envelope {
  enum class Type { Burst, Nack, Abort };
  Type type = Type::Burst;
  int step = 0;
  int attempt = 0;
  IqBuffer iq;
};

class BlockingQueue {
 public:
  void push(Envelope env) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      items_.push_back(std::move(env));
    }
    cv_.notify_one();
  }
  Envelope pop() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return !items_.empty(); });
    Envelope env = std::move(items_.front());
    items_.pop_front();
    return env;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Envelope> items_;
};

// Everything both party tasks share: the queues, the channel model, the
// transcript, and the concatenated IQ log. The protocol is strictly
// alternating, so entries are merged by (step, attempt).
struct Air {
  const Scenario& scenario;
  const std::optional<TamperSpec>& tamper;
  BlockingQueue to_supplicant;
  BlockingQueue to_authenticator;
  std::mutex log_mu;
  std::vector<TranscriptEntry> transcript;
  std::vector<ofdm::cfloat> iq;
  double air_time_s = 0.0;

  Air(const Scenario& s, const std::optional<TamperSpec>& t)
      : scenario(s), tamper(t) {}

  // Modulates one 96-byte burst, runs it through the channel, logs it, and
  // delivers it to the peer queue.
  void send_frame(Role sender, int step, int attempt, const Frame& frame_in,
                  const char* kind) {
    Frame frame = frame_in;
    if (tamper && tamper->mutate && tamper->step == step && attempt == 0) {
      tamper->mutate(frame);
    }
    ofdm::TaggedPayload payload;
    std::copy(frame.begin(), frame.end(), payload.bytes.begin());
    payload.frame_index = static_cast<std::uint32_t>(step);

    IqBuffer clean = ofdm::transmit_frame(payload, scenario.modulation,
                                          ofdm::CarrierPlan::ieee80211a(),
                                          scenario.gain);
    IqBuffer padded;
    padded.sample_rate_hz = clean.sample_rate_hz;
    padded.samples.assign(kLeadInSamples, ofdm::cfloat(0.f, 0.f));
    padded.samples.insert(padded.samples.end(), clean.samples.begin(),
                          clean.samples.end());
    padded.samples.insert(padded.samples.end(), kLeadOutSamples,
                          ofdm::cfloat(0.f, 0.f));

    channel::ChannelConfig cfg = scenario.channel;
    cfg.seed = splitmix64(scenario.channel.seed ^
                          (static_cast<std::uint64_t>(step) * 16 + attempt));
    IqBuffer impaired = channel::apply_channel(padded, cfg);
    if (tamper && tamper->mutate_iq) {
      tamper->mutate_iq(step, attempt, impaired);
    }

    {
      std::lock_guard<std::mutex> lock(log_mu);
      air_time_s += 8.0 * perf::frame_air_bytes() / scenario.frame_rate_bps;
      TranscriptEntry entry;
      entry.step = step;
      entry.attempt = attempt;
      entry.direction = sender == Role::Authenticator ? "A->S" : "S->A";
      entry.kind = kind;
      entry.frame_hex = to_hex(frame);
      entry.t_air_s = air_time_s;
      transcript.push_back(std::move(entry));
      iq.insert(iq.end(), impaired.samples.begin(), impaired.samples.end());
    }

    Envelope env;
    env.type = Envelope::Type::Burst;
    env.step = step;
    env.attempt = attempt;
    env.iq = std::move(impaired);
    peer_queue(sender).push(std::move(env));
  }

  BlockingQueue& peer_queue(Role sender) {
    return sender == Role::Authenticator ? to_supplicant : to_authenticator;
  }
  BlockingQueue& own_queue(Role self) {
    return self == Role::Authenticator ? to_authenticator : to_supplicant;
  }
};

struct PartyFailure {
  Errc code;
  std::string what;
  bool peer_abort = false;
};

// One party's view of the exchange: send bursts, receive-and-decode with a
// single retransmission round per step.
class PartyIo {
 public:
  PartyIo(Air& air, Role self) : air_(air), self_(self) {}

  void send(int step, const Frame& frame, const char* kind) {
    last_frame_ = frame;
    last_kind_ = kind;
    air_.send_frame(self_, step, 0, frame, kind);
  }

  // Blocks until a decodable burst for `expect_step` arrives. Sends a NACK
  // and waits for the retransmission on decode failure; a second failure
  // aborts the session.
  std::optional<Frame> receive(int expect_step) {
    bool nacked = false;
    while (true) {
      Envelope env = air_.own_queue(self_).pop();
      if (env.type == Envelope::Type::Abort) {
        failure_ = PartyFailure{Errc::auth_failure, "peer aborted", true};
        return std::nullopt;
      }
      if (env.type == Envelope::Type::Nack) {
        // Peer missed our last frame: retransmit it once.
        air_.send_frame(self_, env.step, 1, last_frame_, last_kind_);
        continue;
      }
      const auto decoded = decode(env.iq);
      if (decoded) return decoded;
      if (!nacked) {
        nacked = true;
        Envelope nack;
        nack.type = Envelope::Type::Nack;
        nack.step = expect_step;
        air_.peer_queue(self_).push(std::move(nack));
        continue;
      }
      send_abort();
      failure_ = PartyFailure{Errc::decode_failure,
                              "frame decode failed twice at step " +
                                  std::to_string(expect_step)};
      return std::nullopt;
    }
  }

  void send_abort() {
    Envelope abort;
    abort.type = Envelope::Type::Abort;
    air_.peer_queue(self_).push(std::move(abort));
  }

  const std::optional<PartyFailure>& failure() const { return failure_; }
  void set_failure(Errc code, const std::string& what) {
    failure_ = PartyFailure{code, what};
  }

 private:
  std::optional<Frame> decode(const IqBuffer& iq) {
    ofdm::ReceiveOptions opts;
    opts.detection_floor = air_.scenario.detection_floor;
    const auto frame = ofdm::receive_frame(iq, air_.scenario.modulation,
                                           ofdm::CarrierPlan::ieee80211a(),
                                           opts);
    if (!frame) return std::nullopt;
    Frame out;
    std::copy(frame->payload.begin(), frame->payload.end(), out.begin());
    return out;
  }

  Air& air_;
  Role self_;
  Frame last_frame_{};
  const char* last_kind_ = "";
  std::optional<PartyFailure> failure_;
};

PartyState make_party(const Scenario& s, Role role) {
  const Block16 base = s.effective_replay_base();
  if (role == Role::Authenticator) {
    return PartyState(role, s.scheme, s.pmk, s.ap_mac, s.sta_mac, base);
  }
  return PartyState(role, s.scheme, s.pmk, s.sta_mac, s.ap_mac, base);
}

}  // namespace

std::string transcript_to_jsonl(const std::vector<TranscriptEntry>& entries) {
  std::ostringstream out;
  for (const auto& e : entries) {
    nlohmann::json j{{"step", e.step},
                     {"attempt", e.attempt},
                     {"direction", e.direction},
                     {"kind", e.kind},
                     {"frame_hex", e.frame_hex},
                     {"t_air_s", e.t_air_s}};
    out << j.dump() << '\n';
  }
  return out.str();
}

HandshakeOutcome run_handshake(const Scenario& scenario,
                               const std::optional<TamperSpec>& tamper) {
  Air air(scenario, tamper);
  PartyState authenticator = make_party(scenario, Role::Authenticator);
  PartyState supplicant = make_party(scenario, Role::Supplicant);
  PartyIo auth_io(air, Role::Authenticator);
  PartyIo supp_io(air, Role::Supplicant);

  const Seed256 anonce_seed = derive_seed(scenario.seed, 0xA0);
  const Seed256 snonce_seed = derive_seed(scenario.seed, 0x50);

  std::thread auth_thread([&] {
    try {
      const HandshakeMessage m1 = handshake::auth_start(authenticator,
                                                        anonce_seed);
      auth_io.send(1, m1.padded_frame, kind_name(m1.kind));
      const auto f2 = auth_io.receive(2);
      if (!f2) return;
      const HandshakeMessage m3 = handshake::authenticator_on_msg2(
          authenticator, handshake::parse_frame(*f2));
      auth_io.send(3, m3.padded_frame, kind_name(m3.kind));
      const auto f4 = auth_io.receive(4);
      if (!f4) return;
      handshake::authenticator_on_msg4(authenticator,
                                       handshake::parse_frame(*f4));
    } catch (const SimError& e) {
      auth_io.set_failure(e.code(), e.what());
      auth_io.send_abort();
    }
  });

  std::thread supp_thread([&] {
    try {
      const auto f1 = supp_io.receive(1);
      if (!f1) return;
      const HandshakeMessage m2 = handshake::supplicant_on_msg1(
          supplicant, handshake::parse_frame(*f1), snonce_seed);
      supp_io.send(2, m2.padded_frame, kind_name(m2.kind));
      const auto f3 = supp_io.receive(3);
      if (!f3) return;
      const HandshakeMessage m4 =
          handshake::supplicant_on_msg3(supplicant, handshake::parse_frame(*f3));
      supp_io.send(4, m4.padded_frame, kind_name(m4.kind));
    } catch (const SimError& e) {
      supp_io.set_failure(e.code(), e.what());
      supp_io.send_abort();
    }
  });

  auth_thread.join();
  supp_thread.join();

  HandshakeOutcome outcome;
  std::sort(air.transcript.begin(), air.transcript.end(),
            [](const TranscriptEntry& a, const TranscriptEntry& b) {
              return std::tie(a.step, a.attempt) < std::tie(b.step, b.attempt);
            });
  outcome.transcript = std::move(air.transcript);
  outcome.iq = std::move(air.iq);
  outcome.air_time_s = air.air_time_s;

  const auto& auth_fail = auth_io.failure();
  const auto& supp_fail = supp_io.failure();
  const bool installed =
      authenticator.phase() == handshake::Phase::Installed &&
      supplicant.phase() == handshake::Phase::Installed;
  if (installed && !auth_fail && !supp_fail) {
    outcome.ok = true;
  } else if (supp_fail && !supp_fail->peer_abort) {
    outcome.failure_code = supp_fail->code;
    outcome.failure = "supplicant: " + supp_fail->what;
  } else if (auth_fail && !auth_fail->peer_abort) {
    outcome.failure_code = auth_fail->code;
    outcome.failure = "authenticator: " + auth_fail->what;
  } else if (supp_fail) {
    outcome.failure_code = supp_fail->code;
    outcome.failure = "supplicant: " + supp_fail->what;
  } else if (auth_fail) {
    outcome.failure_code = auth_fail->code;
    outcome.failure = "authenticator: " + auth_fail->what;
  } else {
    outcome.failure_code = Errc::wrong_phase;
    outcome.failure = "handshake ended before key installation";
  }
  outcome.supplicant = std::move(supplicant);
  outcome.authenticator = std::move(authenticator);
  return outcome;
}

DirectRunResult run_handshake_direct(const Scenario& scenario,
                                     const std::optional<TamperSpec>& tamper) {
  PartyState authenticator = make_party(scenario, Role::Authenticator);
  PartyState supplicant = make_party(scenario, Role::Supplicant);
  DirectRunResult result;

  auto deliver = [&](int step, Frame frame) -> Frame {
    if (tamper && tamper->mutate && tamper->step == step) tamper->mutate(frame);
    result.frames.push_back(frame);
    return frame;
  };

  try {
    const auto m1 = handshake::auth_start(authenticator,
                                          derive_seed(scenario.seed, 0xA0));
    const auto m2 = handshake::supplicant_on_msg1(
        supplicant, handshake::parse_frame(deliver(1, m1.padded_frame)),
        derive_seed(scenario.seed, 0x50));
    const auto m3 = handshake::authenticator_on_msg2(
        authenticator, handshake::parse_frame(deliver(2, m2.padded_frame)));
    const auto m4 = handshake::supplicant_on_msg3(
        supplicant, handshake::parse_frame(deliver(3, m3.padded_frame)));
    handshake::authenticator_on_msg4(
        authenticator, handshake::parse_frame(deliver(4, m4.padded_frame)));
    result.ok = supplicant.phase() == handshake::Phase::Installed &&
                authenticator.phase() == handshake::Phase::Installed;
    if (!result.ok) {
      result.failure_code = Errc::wrong_phase;
      result.failure = "keys not installed";
    }
  } catch (const SimError& e) {
    result.ok = false;
    result.failure_code = e.code();
    result.failure = e.what();
  }
  return result;
}

namespace {

// Record wire image: seq (8 LE) | ad_len (2 LE) | msg_len (2 LE) | ad | ct |
// tag, zero padded by the tagged-stream splitter.
Bytes encode_record(const handshake::ProtectedRecord& rec) {
  Bytes wire;
  wire.reserve(12 + rec.ad.size() + rec.ciphertext.size() + 16);
  for (int i = 0; i < 8; ++i) {
    wire.push_back(static_cast<std::uint8_t>(rec.seq >> (8 * i)));
  }
  const std::uint16_t ad_len = static_cast<std::uint16_t>(rec.ad.size());
  const std::uint16_t msg_len = static_cast<std::uint16_t>(rec.ciphertext.size());
  wire.push_back(static_cast<std::uint8_t>(ad_len & 0xFF));
  wire.push_back(static_cast<std::uint8_t>(ad_len >> 8));
  wire.push_back(static_cast<std::uint8_t>(msg_len & 0xFF));
  wire.push_back(static_cast<std::uint8_t>(msg_len >> 8));
  wire.insert(wire.end(), rec.ad.begin(), rec.ad.end());
  wire.insert(wire.end(), rec.ciphertext.begin(), rec.ciphertext.end());
  wire.insert(wire.end(), rec.tag.begin(), rec.tag.end());
  return wire;
}

std::optional<handshake::ProtectedRecord> decode_record(
    std::span<const std::uint8_t> wire) {
  if (wire.size() < 12 + 16) return std::nullopt;
  handshake::ProtectedRecord rec;
  rec.seq = 0;
  for (int i = 0; i < 8; ++i) {
    rec.seq |= static_cast<std::uint64_t>(wire[i]) << (8 * i);
  }
  const std::size_t ad_len = wire[8] | (wire[9] << 8);
  const std::size_t msg_len = wire[10] | (wire[11] << 8);
  if (12 + ad_len + msg_len + 16 > wire.size()) return std::nullopt;
  rec.ad.assign(wire.begin() + 12, wire.begin() + 12 + ad_len);
  rec.ciphertext.assign(wire.begin() + 12 + ad_len,
                        wire.begin() + 12 + ad_len + msg_len);
  std::copy(wire.begin() + 12 + ad_len + msg_len,
            wire.begin() + 12 + ad_len + msg_len + 16, rec.tag.begin());
  return rec;
}

}  // namespace

DataPhaseStats run_data_phase(const Scenario& scenario,
                              HandshakeOutcome& completed) {
  if (!completed.ok || !completed.supplicant || !completed.authenticator) {
    fail(Errc::not_installed, "data phase requires a completed handshake");
  }
  PartyState& sender = *completed.supplicant;
  PartyState& receiver = *completed.authenticator;

  DataPhaseStats stats;
  stats.air_time_s = completed.air_time_s;
  Xoshiro256 payload_rng = Xoshiro256::from_bytes(
      derive_seed(scenario.seed, 0xDA7A));
  const auto& plan = ofdm::CarrierPlan::ieee80211a();

  for (int i = 0; i < scenario.data_phase.n_records; ++i) {
    ++stats.sent;
    Bytes msg(static_cast<std::size_t>(scenario.data_phase.msg_blocks) * 8);
    payload_rng.fill(msg);
    Bytes ad(static_cast<std::size_t>(scenario.data_phase.ad_blocks) * 8);
    payload_rng.fill(ad);

    const auto rec = handshake::protect(sender, ad, msg);
    const Bytes wire = encode_record(rec);

    // Modulate the record as consecutive tagged frames in one burst.
    IqBuffer burst;
    bool first = true;
    for (const auto& payload : ofdm::tag_stream(wire)) {
      if (!first) {
        burst.samples.insert(burst.samples.end(), kInterFrameGap,
                             ofdm::cfloat(0.f, 0.f));
      }
      first = false;
      const IqBuffer frame_iq = ofdm::transmit_frame(
          payload, scenario.modulation, plan, scenario.gain);
      burst.samples.insert(burst.samples.end(), frame_iq.samples.begin(),
                           frame_iq.samples.end());
    }
    IqBuffer padded;
    padded.samples.assign(kLeadInSamples, ofdm::cfloat(0.f, 0.f));
    padded.samples.insert(padded.samples.end(), burst.samples.begin(),
                          burst.samples.end());
    padded.samples.insert(padded.samples.end(), kLeadOutSamples,
                          ofdm::cfloat(0.f, 0.f));

    channel::ChannelConfig cfg = scenario.channel;
    cfg.seed = splitmix64(scenario.channel.seed ^
                          (0x0DA7A000ULL + static_cast<std::uint64_t>(i)));
    const IqBuffer impaired = channel::apply_channel(padded, cfg);

    stats.iq.insert(stats.iq.end(), impaired.samples.begin(),
                    impaired.samples.end());
    const std::size_t n_frames = (wire.size() + 95) / 96;
    stats.air_time_s += 8.0 * perf::frame_air_bytes() *
                        static_cast<double>(n_frames) /
                        scenario.frame_rate_bps;
    TranscriptEntry entry;
    entry.step = 100 + i;
    entry.direction = "S->A";
    entry.kind = "ProtectedRecord";
    entry.frame_hex = to_hex(wire);
    entry.t_air_s = stats.air_time_s;
    stats.transcript.push_back(std::move(entry));

    // Demodulate frame by frame.
    Bytes rx_wire;
    std::size_t cursor = 0;
    bool decode_ok = true;
    for (std::size_t f = 0; f < n_frames; ++f) {
      IqBuffer window;
      window.samples.assign(impaired.samples.begin() + cursor,
                            impaired.samples.end());
      ofdm::ReceiveOptions opts;
      opts.detection_floor = scenario.detection_floor;
      const auto decoded =
          ofdm::receive_frame(window, scenario.modulation, plan, opts);
      if (!decoded) {
        decode_ok = false;
        break;
      }
      rx_wire.insert(rx_wire.end(), decoded->payload.begin(),
                     decoded->payload.end());
      cursor += decoded->sync.frame_start +
                ofdm::frame_sample_count(scenario.modulation);
    }
    if (!decode_ok) {
      ++stats.decode_failures;
      continue;
    }
    const auto rx_rec = decode_record(rx_wire);
    if (!rx_rec) {
      ++stats.decode_failures;
      continue;
    }
    try {
      const Bytes plain = handshake::unprotect(receiver, *rx_rec);
      ++stats.delivered;
      stats.payload_bits += 8 * msg.size();
      std::uint64_t errors = 0;
      for (std::size_t b = 0; b < msg.size() && b < plain.size(); ++b) {
        errors += std::popcount(static_cast<unsigned>(msg[b] ^ plain[b]));
      }
      stats.payload_bit_errors += errors;
    } catch (const SimError& e) {
      if (e.code() == Errc::replay_detected) {
        ++stats.replays;
      } else {
        ++stats.auth_failures;
      }
    }
  }
  return stats;
}

double snr_db_to_ebn0_db(double snr_db, Modulation modulation) {
  // Per-sample signal power is 52/64 of a unit-energy constellation symbol;
  // each active carrier bears bits_per_symbol bits.
  const double bits = static_cast<double>(ofdm::bits_per_symbol(modulation));
  return snr_db + 10.0 * std::log10(64.0 / (52.0 * bits));
}

LinkBerResult measure_link_ber(Modulation modulation,
                               const channel::ChannelConfig& config,
                               std::uint64_t min_bits, std::uint64_t seed) {
  const auto& plan = ofdm::CarrierPlan::ieee80211a();
  const double gain = 0.02;
  const std::uint64_t bits_per_frame = 8 * ofdm::kPayloadBytes;

  Xoshiro256 payload_rng =
      Xoshiro256::from_bytes(derive_seed(seed, 0xBE12));

  auto make_frame = [&](std::uint32_t index) {
    ofdm::TaggedPayload payload;
    payload.frame_index = index;
    payload_rng.fill(payload.bytes);
    return payload;
  };
  auto pass_channel = [&](const IqBuffer& clean, std::uint64_t counter) {
    channel::ChannelConfig cfg = config;
    cfg.seed = splitmix64(seed ^ (0xC4A11ULL + counter));
    return channel::apply_channel(clean, cfg);
  };

  // Warmup: average the sounding-symbol channel estimate over a fixed number
  // of frames; the channel is static, so the average converges on the true
  // per-bin gains without any genie knowledge.
  constexpr int kWarmupFrames = 64;
  std::array<std::complex<double>, 64> acc{};
  for (int w = 0; w < kWarmupFrames; ++w) {
    const auto payload = make_frame(static_cast<std::uint32_t>(w));
    const IqBuffer tx = ofdm::transmit_frame(payload, modulation, plan, gain);
    const IqBuffer rx = pass_channel(tx, 0x5000 + w);
    const auto estimate = ofdm::sounding_estimate(rx, 0);
    if (!estimate) continue;
    for (std::size_t b = 0; b < 64; ++b) {
      acc[b] += std::complex<double>((*estimate)[b].real(),
                                     (*estimate)[b].imag());
    }
  }
  std::array<ofdm::cfloat, 64> gains{};
  for (std::size_t b = 0; b < 64; ++b) {
    const auto g = acc[b] / static_cast<double>(kWarmupFrames);
    gains[b] = ofdm::cfloat(static_cast<float>(g.real()),
                            static_cast<float>(g.imag()));
  }

  LinkBerResult result;
  std::uint64_t counter = 0;
  while (result.bits < min_bits) {
    const auto payload = make_frame(static_cast<std::uint32_t>(counter));
    const IqBuffer tx = ofdm::transmit_frame(payload, modulation, plan, gain);
    const IqBuffer rx = pass_channel(tx, counter);
    ++counter;

    ofdm::ReceiveOptions opts;
    opts.known_start = 0;
    opts.channel_override = &gains;
    opts.require_header = false;  // raw payload BER, frames never dropped
    const auto decoded = ofdm::receive_frame(rx, modulation, plan, opts);
    result.bits += bits_per_frame;
    if (!decoded) {
      result.bit_errors += bits_per_frame;
      continue;
    }
    for (std::size_t b = 0; b < ofdm::kPayloadBytes; ++b) {
      result.bit_errors += std::popcount(
          static_cast<unsigned>(payload.bytes[b] ^ decoded->payload[b]));
    }
  }
  return result;
}

std::vector<BerPoint> run_ber_sweep(Modulation modulation,
                                    std::span<const double> snr_list,
                                    std::uint64_t bits_per_point,
                                    std::uint64_t seed) {
  std::vector<BerPoint> points;
  points.reserve(snr_list.size());
  for (std::size_t i = 0; i < snr_list.size(); ++i) {
    channel::ChannelConfig cfg;
    cfg.snr_db = snr_list[i];
    const auto r = measure_link_ber(modulation, cfg, bits_per_point,
                                    splitmix64(seed + i));
    BerPoint p;
    p.snr_db = snr_list[i];
    p.bits = r.bits;
    p.bit_errors = r.bit_errors;
    p.sim_ber = r.ber();
    const int m = modulation == Modulation::Bpsk ? 2 : 4;
    p.theory_ber = channel::theoretical_ber_mpsk(
        m, snr_db_to_ebn0_db(snr_list[i], modulation));
    points.push_back(p);
  }
  return points;
}

std::string ber_points_to_csv(const std::vector<BerPoint>& points) {
  std::ostringstream out;
  out << "snr_db,sim_ber,theory_ber\n";
  char buf[128];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.8g,%.8g\n", p.snr_db, p.sim_ber,
                  p.theory_ber);
    out << buf;
  }
  return out.str();
}

}  // namespace lwlink::sim
