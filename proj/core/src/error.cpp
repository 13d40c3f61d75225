#include "deltadiv/error.hpp"

namespace deltadiv {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SumOutOfTolerance: return "SumOutOfTolerance";
    case ErrorCode::TooFewClasses: return "TooFewClasses";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::ZeroInReference: return "ZeroInReference";
    case ErrorCode::MissingDerivative: return "MissingDerivative";
    case ErrorCode::ZeroEntry: return "ZeroEntry";
    case ErrorCode::InvalidGenerator: return "InvalidGenerator";
    case ErrorCode::InfeasibleConstraint: return "InfeasibleConstraint";
    case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownMeasure: return "UnknownMeasure";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::WriteFailure: return "WriteFailure";
  }
  return "Unknown";
}

}  // namespace deltadiv
