#pragma once

#include <stdexcept>
#include <string>

namespace lwlink {

enum class Errc {
  unsupported_width,
  data_limit_exceeded,
  oversize_input,
  length_mismatch,
  invalid_symbol,
  non_positive_gain,
  non_positive_input,
  empty_buffer,
  delay_too_large,
  invalid_modulation_order,
  zero_pilot,
  phase_violation,
  wrong_role,
  wrong_phase,
  malformed_frame,
  mic_mismatch,
  nonce_mismatch,
  replay_detected,
  not_installed,
  auth_failure,
  missing_entry,
  decode_failure,
  parse_error,
};

const char* errc_name(Errc c);

class SimError : public std::runtime_error {
 public:
  SimError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace lwlink
