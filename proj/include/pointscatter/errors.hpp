#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pointscatter {

enum class ErrorCode {
  InvalidInput,
  ImpermeableInteraction,
  DegenerateDenominator,
  SingularMatrix,
  GridTooCoarse,
  NoConvergence,
  UnknownCase,
  CaseHasNoBoundEquation,
  CaseHasNoResonances,
  UnknownBoundary,
  InvalidStrength,
  RegionOnRealAxisOnly,
  InternalError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidInput: return "InvalidInput";
  case ErrorCode::ImpermeableInteraction: return "ImpermeableInteraction";
  case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
  case ErrorCode::SingularMatrix: return "SingularMatrix";
  case ErrorCode::GridTooCoarse: return "GridTooCoarse";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::UnknownCase: return "UnknownCase";
  case ErrorCode::CaseHasNoBoundEquation: return "CaseHasNoBoundEquation";
  case ErrorCode::CaseHasNoResonances: return "CaseHasNoResonances";
  case ErrorCode::UnknownBoundary: return "UnknownBoundary";
  case ErrorCode::InvalidStrength: return "InvalidStrength";
  case ErrorCode::RegionOnRealAxisOnly: return "RegionOnRealAxisOnly";
  case ErrorCode::InternalError: return "InternalError";
  }
  return "Unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace pointscatter
