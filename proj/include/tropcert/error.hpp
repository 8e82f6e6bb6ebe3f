#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tropcert {

enum class ErrorCode {
  ZeroVector,
  DimensionMismatch,
  NotSaturated,
  MalformedCurve,
  Disconnected,
  NotSpanningTree,
  GraphMismatch,
  FrameNotBasis,
  UnsupportedDimension,
  NotSmoothVertex,
  NotTransverse,
  ColoringViolation,
  ExhaustedRetries,
  TorusFactorConflict,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for precondition failures; the code identifies
// which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tropcert
