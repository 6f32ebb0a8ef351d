#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lwlink/errors.hpp"
#include "lwlink/handshake.hpp"
#include "lwlink/ofdm_rx.hpp"
#include "lwlink/scenario.hpp"

namespace lwlink::sim {

struct TranscriptEntry {
  int step = 0;     // protocol message 1..4, or 100+seq for data records
  int attempt = 0;  // 0 first transmission, 1 retransmission
  std::string direction;  // "A->S" or "S->A"
  std::string kind;
  std::string frame_hex;  // payload bytes handed to the modem
  double t_air_s = 0.0;   // cumulative simulated air time after this frame
};

std::string transcript_to_jsonl(const std::vector<TranscriptEntry>& entries);

// In-flight frame mutation (simulated man-in-the-middle). `step` selects the
// protocol message; the callback edits the 96-byte frame before modulation.
struct TamperSpec {
  int step = 0;
  std::function<void(handshake::Frame&)> mutate;
  // Optional post-channel sample mutation, e.g. to force a decode failure on
  // one attempt; called for every transmission.
  std::function<void(int step, int attempt, ofdm::IqBuffer&)> mutate_iq;
};

struct HandshakeOutcome {
  bool ok = false;
  Errc failure_code = Errc::parse_error;
  std::string failure;
  std::vector<TranscriptEntry> transcript;
  std::vector<ofdm::cfloat> iq;  // all transmissions, concatenated
  double air_time_s = 0.0;
  std::optional<handshake::PartyState> supplicant;
  std::optional<handshake::PartyState> authenticator;
};

// Executes the four-message flow end to end with the two parties running as
// independent tasks exchanging IqBuffers through queues; every frame passes
// through the transmit chain, the configured channel, and the receive chain.
// A frame whose decode fails is retransmitted once before the run aborts.
HandshakeOutcome run_handshake(const Scenario& scenario,
                               const std::optional<TamperSpec>& tamper = {});

// Protocol-level run handing frames directly between the parties (no modem);
// used for exhaustive tamper/replay sweeps.
struct DirectRunResult {
  bool ok = false;
  Errc failure_code = Errc::parse_error;
  std::string failure;
  std::vector<handshake::Frame> frames;  // as delivered (post-tamper)
};
DirectRunResult run_handshake_direct(const Scenario& scenario,
                                     const std::optional<TamperSpec>& tamper = {});

struct DataPhaseStats {
  int sent = 0;
  int delivered = 0;
  int auth_failures = 0;
  int decode_failures = 0;
  int replays = 0;
  std::uint64_t payload_bits = 0;
  std::uint64_t payload_bit_errors = 0;  // over delivered plaintexts
  std::vector<TranscriptEntry> transcript;
  std::vector<ofdm::cfloat> iq;
  double air_time_s = 0.0;
};

// Sends n_records protected records supplicant -> authenticator over the
// modeled link. Requires a completed handshake outcome.
DataPhaseStats run_data_phase(const Scenario& scenario,
                              HandshakeOutcome& completed);

struct LinkBerResult {
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  double ber() const {
    return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits)
                : 0.0;
  }
};

// Raw modem bit error rate through an arbitrary channel, timing known and a
// channel estimate averaged over warmup frames (the link is static). Frames
// are never dropped; payload bits are compared positionally.
LinkBerResult measure_link_ber(ofdm::Modulation modulation,
                               const channel::ChannelConfig& config,
                               std::uint64_t min_bits, std::uint64_t seed);

struct BerPoint {
  double snr_db = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  double sim_ber = 0.0;
  double theory_ber = 0.0;
};

// Monte Carlo BER sweep over AWGN alongside the analytic curve.
std::vector<BerPoint> run_ber_sweep(ofdm::Modulation modulation,
                                    std::span<const double> snr_list,
                                    std::uint64_t bits_per_point,
                                    std::uint64_t seed);

// Eb/N0 implied by a per-sample SNR on this waveform (52 active of 64 bins).
double snr_db_to_ebn0_db(double snr_db, ofdm::Modulation modulation);

std::string ber_points_to_csv(const std::vector<BerPoint>& points);

}  // namespace lwlink::sim
