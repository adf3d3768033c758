#include "qsynth/error.hpp"

namespace qsynth {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDirective: return "MalformedDirective";
    case ErrorCode::BadCube: return "BadCube";
    case ErrorCode::ConflictingRows: return "ConflictingRows";
    case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::AllZeroWithFactor: return "AllZeroWithFactor";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::NotComplete: return "NotComplete";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotBijective: return "NotBijective";
    case ErrorCode::NoPivot: return "NoPivot";
    case ErrorCode::DuplicateAddress: return "DuplicateAddress";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::PatternIncomplete: return "PatternIncomplete";
    case ErrorCode::NoSymmetry: return "NoSymmetry";
    case ErrorCode::NonClassicalGate: return "NonClassicalGate";
    case ErrorCode::TooManyQubits: return "TooManyQubits";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::UnsupportedGateForGateset: return "UnsupportedGateForGateset";
    case ErrorCode::UnsupportedStatement: return "UnsupportedStatement";
    case ErrorCode::NoSolutions: return "NoSolutions";
    case ErrorCode::AllSolutions: return "AllSolutions";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qsynth
