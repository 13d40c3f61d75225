#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace deltadiv {

enum class ErrorCode {
  NegativeEntry,
  NonFinite,
  SumOutOfTolerance,
  TooFewClasses,
  OutOfRange,
  DimensionMismatch,
  InvalidAlpha,
  ZeroInReference,
  MissingDerivative,
  ZeroEntry,
  InvalidGenerator,
  InfeasibleConstraint,
  RejectionBudgetExceeded,
  InvalidConfig,
  UnknownMeasure,
  EmptyInput,
  ParseError,
  WriteFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library error carrying a machine-readable code. Internal invariant
/// violations are reported with std::logic_error instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace deltadiv
