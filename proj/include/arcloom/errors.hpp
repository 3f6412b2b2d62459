#pragma once

#include <stdexcept>
#include <string>

namespace arcloom {

// Failure taxonomy for the whole engine.  Every throwing operation documents
// which of these codes it can raise; CLI exit codes are derived from them.
enum class errc {
  order_zero_input,
  not_regular,
  zero_series,
  partition_violation,
  singular_within_validity,
  rank_deficient_within_validity,
  domain_mismatch,
  ring_busy,
  unsupported,
  window_insufficient,
  non_unit_pivot,
  not_contractive,
  budget_exceeded,
  order_condition_failed,
  linearization_probe_failed,
  indeterminate,
  obstructed,
  representation_invalid,
  precondition_gap,
  not_monic,
  conditions_violated,
  unknown_suite,
  parse_error,
  internal,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
public:
  error(errc code, const std::string& message, std::string witness = {})
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code(code),
        witness(std::move(witness)) {}

  errc code;
  std::string witness;  // optional machine-readable payload (e.g. an offending exponent)
};

[[noreturn]] inline void fail(errc code, const std::string& message, std::string witness = {}) {
  throw error(code, message, std::move(witness));
}

// Internal-consistency guard: conditions that are supposed to be unreachable.
inline void require_internal(bool ok, const std::string& message) {
  if (!ok) fail(errc::internal, message);
}

}  // namespace arcloom
