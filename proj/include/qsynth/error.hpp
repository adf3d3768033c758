#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsynth {

enum class ErrorCode {
  MalformedDirective,
  BadCube,
  ConflictingRows,
  SizeLimitExceeded,
  NotInjective,
  WidthMismatch,
  EmptyInput,
  AllZeroWithFactor,
  AllZero,
  NotPowerOfTwo,
  NotComplete,
  NotSquare,
  NotBijective,
  NoPivot,
  DuplicateAddress,
  ValueOutOfRange,
  NotNormalized,
  PatternIncomplete,
  NoSymmetry,
  NonClassicalGate,
  TooManyQubits,
  NonConvergent,
  UnsupportedGateForGateset,
  UnsupportedStatement,
  NoSolutions,
  AllSolutions,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qsynth
