#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace saft {

enum class ErrorCode {
  NotInvertible,
  NotExpanding,
  MissingZeroDigit,
  DuplicateDigit,
  DimensionMismatch,
  BudgetExceeded,
  NotACollision,
  EmptyPointSet,
  UnsupportedDimension,
  SingularMatrix,
  InvalidCoefficient,
  InvalidArgument,
  ResolutionTooSmall,
  NotATileCandidate,
  NoTrustedLowerEntry,
  NotASimilarity,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every domain failure in the library is reported through this type; the
// code is stable and the CLI maps it to exit status 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace saft
