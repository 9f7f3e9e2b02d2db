#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace btu {

enum class ErrorCode {
  NonPositiveMu3,
  PositiveMu2InRange,
  RangeOutsideValidity,
  NoIntersection,
  NonPositiveNu2,
  QuadratureNotConverged,
  NoThreeEquilibria,
  BracketFailed,
  StepSizeUnderflow,
  MaxTimeExceeded,
  NoCrossing,
  RootNotBracketed,
  NonPositiveAlpha,
  ZeroA12,
  BranchUnavailable,
  HypothesesViolated,
  CycleNotFound,
  PreconditionViolated,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the named codes above;
/// the CLI maps them to exit status 1 and prints `what()`.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace btu
