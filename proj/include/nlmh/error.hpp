#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlmh {

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  NonZeroMean,
  NotDivergenceFree,
  GridMismatch,
  TimeMismatch,
  EpsilonOutOfRange,
  UnderResolvedKernel,
  DomainViolation,
  MissingKernel,
  StateRejected,
  StepSizeViolation,
  SeparationViolation,
  InputRejected,
  DegenerateInput,
  ParseError,
  ValidationError,
  CorruptSnapshot,
  UnsupportedVersion,
  IoError,
};

inline std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::NotDivergenceFree: return "NotDivergenceFree";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::TimeMismatch: return "TimeMismatch";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::UnderResolvedKernel: return "UnderResolvedKernel";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::MissingKernel: return "MissingKernel";
    case ErrorCode::StateRejected: return "StateRejected";
    case ErrorCode::StepSizeViolation: return "StepSizeViolation";
    case ErrorCode::SeparationViolation: return "SeparationViolation";
    case ErrorCode::InputRejected: return "InputRejected";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::CorruptSnapshot: return "CorruptSnapshot";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace nlmh
