#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stoplab {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,
  kHorizonCapExceeded,
  kNotFound,
  kDecisionRequired,
  kNoPendingObservation,
  kSessionFinalized,
  kNotFinalized,
  kProtocolViolation,
  kParse,
  kIo,
};

/// Stable snake_case identifier, used as the "error" field of API responses.
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace stoplab
