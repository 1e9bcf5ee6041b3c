#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace svdrank {

/// Failure categories raised by the library. Every thrown svdrank::Error
/// carries exactly one of these.
enum class ErrorCode {
  DimensionMismatch,
  InvalidParam,
  DegenerateSpectrum,
  NotConverged,
  ZeroProjection,
  GraphDisconnected,
  IsolatedNode,
  EmptyRatios,
  ZeroDenominator,
  DegenerateScores,
  DegenerateVariance,
  PreconditionViolated,
  ZeroGap,
  ParseError,
  SelfLoop,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace svdrank
