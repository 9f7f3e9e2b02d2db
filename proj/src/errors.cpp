#include "btu/errors.hpp"

namespace btu {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveMu3: return "NonPositiveMu3";
    case ErrorCode::PositiveMu2InRange: return "PositiveMu2InRange";
    case ErrorCode::RangeOutsideValidity: return "RangeOutsideValidity";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::NonPositiveNu2: return "NonPositiveNu2";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::NoThreeEquilibria: return "NoThreeEquilibria";
    case ErrorCode::BracketFailed: return "BracketFailed";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::MaxTimeExceeded: return "MaxTimeExceeded";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::RootNotBracketed: return "RootNotBracketed";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::ZeroA12: return "ZeroA12";
    case ErrorCode::BranchUnavailable: return "BranchUnavailable";
    case ErrorCode::HypothesesViolated: return "HypothesesViolated";
    case ErrorCode::CycleNotFound: return "CycleNotFound";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace btu
