#include "stoplab/error.hpp"

namespace stoplab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kHorizonCapExceeded: return "horizon_cap_exceeded";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kDecisionRequired: return "decision_required";
    case ErrorCode::kNoPendingObservation: return "no_pending_observation";
    case ErrorCode::kSessionFinalized: return "session_finalized";
    case ErrorCode::kNotFinalized: return "not_finalized";
    case ErrorCode::kProtocolViolation: return "protocol_violation";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

}  // namespace stoplab
