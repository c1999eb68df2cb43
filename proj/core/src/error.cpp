#include "embedlab/error.hpp"

namespace embedlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::RepeatedEigenvalues: return "RepeatedEigenvalues";
    case ErrorKind::NegativeRealEigenvalue: return "NegativeRealEigenvalue";
    case ErrorKind::PerturbationFailed: return "PerturbationFailed";
    case ErrorKind::NotZMatrix: return "NotZMatrix";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotAValidPair: return "NotAValidPair";
    case ErrorKind::NotMonomial: return "NotMonomial";
    case ErrorKind::SingularDeterminant: return "SingularDeterminant";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::NotNonnegative: return "NotNonnegative";
    case ErrorKind::OffDiagonalZeros: return "OffDiagonalZeros";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace embedlab
