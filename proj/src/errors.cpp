#include "arcloom/errors.hpp"

namespace arcloom {

const char* errc_name(errc code) {
  switch (code) {
    case errc::order_zero_input: return "ORDER_ZERO_INPUT";
    case errc::not_regular: return "NOT_REGULAR";
    case errc::zero_series: return "ZERO_SERIES";
    case errc::partition_violation: return "PARTITION_VIOLATION";
    case errc::singular_within_validity: return "SINGULAR_WITHIN_VALIDITY";
    case errc::rank_deficient_within_validity: return "RANK_DEFICIENT_WITHIN_VALIDITY";
    case errc::domain_mismatch: return "DOMAIN_MISMATCH";
    case errc::ring_busy: return "RING_BUSY";
    case errc::unsupported: return "UNSUPPORTED";
    case errc::window_insufficient: return "WINDOW_INSUFFICIENT";
    case errc::non_unit_pivot: return "NON_UNIT_PIVOT";
    case errc::not_contractive: return "NOT_CONTRACTIVE";
    case errc::budget_exceeded: return "BUDGET_EXCEEDED";
    case errc::order_condition_failed: return "ORDER_CONDITION_FAILED";
    case errc::linearization_probe_failed: return "LINEARIZATION_PROBE_FAILED";
    case errc::indeterminate: return "INDETERMINATE";
    case errc::obstructed: return "OBSTRUCTED";
    case errc::representation_invalid: return "REPRESENTATION_INVALID";
    case errc::precondition_gap: return "PRECONDITION_GAP";
    case errc::not_monic: return "NOT_MONIC";
    case errc::conditions_violated: return "CONDITIONS_VIOLATED";
    case errc::unknown_suite: return "UNKNOWN_SUITE";
    case errc::parse_error: return "PARSE_ERROR";
    case errc::internal: return "INTERNAL";
  }
  return "INTERNAL";
}

}  // namespace arcloom
