#include "saft/error.hpp"

namespace saft {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NotExpanding: return "NotExpanding";
    case ErrorCode::MissingZeroDigit: return "MissingZeroDigit";
    case ErrorCode::DuplicateDigit: return "DuplicateDigit";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotACollision: return "NotACollision";
    case ErrorCode::EmptyPointSet: return "EmptyPointSet";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::InvalidCoefficient: return "InvalidCoefficient";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ResolutionTooSmall: return "ResolutionTooSmall";
    case ErrorCode::NotATileCandidate: return "NotATileCandidate";
    case ErrorCode::NoTrustedLowerEntry: return "NoTrustedLowerEntry";
    case ErrorCode::NotASimilarity: return "NotASimilarity";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace saft
