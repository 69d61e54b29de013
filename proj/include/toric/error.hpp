#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toric {

enum class ErrorCode {
  EmptyConfig,
  InvalidConfig,
  DegenerateSpan,
  Unsupported,
  MissingLiftValue,
  CoverageGap,
  OverlapViolation,
  BadIntersection,
  FaceNotSubset,
  UnvalidatedInput,
  OutsideDomain,
  ZeroDegree,
  InvalidRelation,
  InvalidPatch,
  NonpositiveT,
  EmptySet,
  ParseError,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is reported as a toric::Error
/// carrying a machine-readable code; the message names the offending input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyConfig: return "EmptyConfig";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::MissingLiftValue: return "MissingLiftValue";
    case ErrorCode::CoverageGap: return "CoverageGap";
    case ErrorCode::OverlapViolation: return "OverlapViolation";
    case ErrorCode::BadIntersection: return "BadIntersection";
    case ErrorCode::FaceNotSubset: return "FaceNotSubset";
    case ErrorCode::UnvalidatedInput: return "UnvalidatedInput";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::ZeroDegree: return "ZeroDegree";
    case ErrorCode::InvalidRelation: return "InvalidRelation";
    case ErrorCode::InvalidPatch: return "InvalidPatch";
    case ErrorCode::NonpositiveT: return "NonpositiveT";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace toric
