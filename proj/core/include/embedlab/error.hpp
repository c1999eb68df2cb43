#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace embedlab {

enum class ErrorKind {
  InvalidInput,
  IllConditioned,
  Overflow,
  SingularMatrix,
  RepeatedEigenvalues,
  NegativeRealEigenvalue,
  PerturbationFailed,
  NotZMatrix,
  OutOfRange,
  NotAValidPair,
  NotMonomial,
  SingularDeterminant,
  NotStochastic,
  NotNonnegative,
  OffDiagonalZeros,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers can map it onto an Undetermined verdict or a usage error.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace embedlab
