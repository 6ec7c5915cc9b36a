#pragma once

#include <stdexcept>
#include <string>

namespace entlab {

// Failure categories surfaced by the library.  Config errors map to CLI
// exit code 2, everything else in this list to exit code 3.
enum class ErrorCode {
  NoSolution,
  NormalizationFailure,
  DimensionUnsupported,
  DimensionMismatch,
  SizeOverflow,
  PositivityViolation,
  EmptyRegion,
  RegionOverlap,
  RegionNotNested,
  MarginTooLarge,
  GaplessSpectrum,
  NotGammaReal,
  NegativeEigenvalue,
  EigenvalueOutOfRange,
  InsufficientPoints,
  AllZeroValues,
  IoFailure,
  ConfigError,
  Internal,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::NormalizationFailure: return "NormalizationFailure";
    case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SizeOverflow: return "SizeOverflow";
    case ErrorCode::PositivityViolation: return "PositivityViolation";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::RegionOverlap: return "RegionOverlap";
    case ErrorCode::RegionNotNested: return "RegionNotNested";
    case ErrorCode::MarginTooLarge: return "MarginTooLarge";
    case ErrorCode::GaplessSpectrum: return "GaplessSpectrum";
    case ErrorCode::NotGammaReal: return "NotGammaReal";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::EigenvalueOutOfRange: return "EigenvalueOutOfRange";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::AllZeroValues: return "AllZeroValues";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace entlab
