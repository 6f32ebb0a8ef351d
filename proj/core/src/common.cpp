#include "lwlink/common.hpp"

#include <cmath>
#include <cstring>

#include "lwlink/errors.hpp"
#include "lwlink/rng.hpp"

namespace lwlink {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::unsupported_width: return "UnsupportedWidth";
    case Errc::data_limit_exceeded: return "DataLimitExceeded";
    case Errc::oversize_input: return "OversizeInput";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::invalid_symbol: return "InvalidSymbol";
    case Errc::non_positive_gain: return "NonPositiveGain";
    case Errc::non_positive_input: return "NonPositiveInput";
    case Errc::empty_buffer: return "EmptyBuffer";
    case Errc::delay_too_large: return "DelayTooLarge";
    case Errc::invalid_modulation_order: return "InvalidM";
    case Errc::zero_pilot: return "ZeroPilot";
    case Errc::phase_violation: return "PhaseViolation";
    case Errc::wrong_role: return "WrongRole";
    case Errc::wrong_phase: return "WrongPhase";
    case Errc::malformed_frame: return "MalformedFrame";
    case Errc::mic_mismatch: return "MicMismatch";
    case Errc::nonce_mismatch: return "NonceMismatch";
    case Errc::replay_detected: return "ReplayDetected";
    case Errc::not_installed: return "NotInstalled";
    case Errc::auth_failure: return "AuthFailure";
    case Errc::missing_entry: return "MissingEntry";
    case Errc::decode_failure: return "DecodeFailure";
    case Errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

void fail(Errc code, const std::string& what) {
  throw SimError(code, std::string(errc_name(code)) + ": " + what);
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Reference: return "Reference";
    case Scheme::Spix: return "SPIX";
    case Scheme::Ace: return "ACE";
    case Scheme::Wage: return "WAGE";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "Reference" || name == "reference") return Scheme::Reference;
  if (name == "SPIX" || name == "spix") return Scheme::Spix;
  if (name == "ACE" || name == "ace") return Scheme::Ace;
  if (name == "WAGE" || name == "wage") return Scheme::Wage;
  fail(Errc::parse_error, "unknown scheme '" + name + "'");
}

std::string to_hex(std::span<const std::uint8_t> data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

namespace {
int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) fail(Errc::parse_error, "odd hex length");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = hex_nibble(hex[2 * i]);
    int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) fail(Errc::parse_error, "bad hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Block16 counter_increment(const Block16& c) {
  Block16 out = c;
  for (int i = 15; i >= 0; --i) {
    if (++out[i] != 0) break;
  }
  return out;
}

int counter_compare(const Block16& a, const Block16& b) {
  return std::memcmp(a.data(), b.data(), 16);
}

Block16 counter_from_u64(std::uint64_t v) {
  Block16 out{};
  for (int i = 15; i >= 8; --i) {
    out[i] = static_cast<std::uint8_t>(v & 0xFF);
    v >>= 8;
  }
  return out;
}

// ---- rng ----

Xoshiro256 Xoshiro256::seeded(std::uint64_t seed) {
  Xoshiro256 g;
  std::uint64_t x = seed;
  for (auto& w : g.s_) w = x = splitmix64(x);
  return g;
}

Xoshiro256 Xoshiro256::from_bytes(const Seed256& seed) {
  Xoshiro256 g;
  bool all_zero = true;
  for (size_t i = 0; i < 4; ++i) {
    std::uint64_t w = 0;
    for (size_t j = 0; j < 8; ++j) {
      w |= static_cast<std::uint64_t>(seed[8 * i + j]) << (8 * j);
    }
    g.s_[i] = w;
    all_zero = all_zero && w == 0;
  }
  if (all_zero) return seeded(1);
  return g;
}

namespace {
constexpr std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl64(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl64(s_[3], 45);
  return result;
}

double Xoshiro256::unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Block16 Xoshiro256::next_block16() {
  Block16 out;
  for (int half = 0; half < 2; ++half) {
    std::uint64_t w = next();
    for (int j = 0; j < 8; ++j) {
      out[8 * half + j] = static_cast<std::uint8_t>(w >> (8 * j));
    }
  }
  return out;
}

void Xoshiro256::fill(std::span<std::uint8_t> out) {
  size_t i = 0;
  while (i < out.size()) {
    std::uint64_t w = next();
    for (int j = 0; j < 8 && i < out.size(); ++j, ++i) {
      out[i] = static_cast<std::uint8_t>(w >> (8 * j));
    }
  }
}

double counter_unit(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t u = splitmix64(splitmix64(seed ^ 0x6c626d6f64656d00ULL) + counter);
  return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> counter_gaussian_pair(std::uint64_t seed,
                                                std::uint64_t counter) {
  const double u1 = counter_unit(seed, 2 * counter);
  const double u2 = counter_unit(seed, 2 * counter + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

Seed256 derive_seed(std::uint64_t master, std::uint64_t tag) {
  Seed256 out;
  std::uint64_t x = splitmix64(master ^ splitmix64(tag));
  for (size_t i = 0; i < 4; ++i) {
    x = splitmix64(x);
    for (size_t j = 0; j < 8; ++j) {
      out[8 * i + j] = static_cast<std::uint8_t>(x >> (8 * j));
    }
  }
  return out;
}

}  // namespace lwlink
