#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sf {

/// Every failure the library reports carries one of these kinds. The CLI maps
/// kinds onto exit codes, so keep the list in sync with tools/cli.cpp.
enum class ErrorKind {
  NotPrime,
  Overflow,
  FieldMismatch,
  NoNonresidue,
  ScanCapExceeded,
  InvalidArgument,
  NotAScheme,
  EDoesNotDivide,
  BadEll,
  TheoremContradiction,
  TooSmall,
  NotHomogeneous,
  Not3Scheme,
  WorkCapExceeded,
  NotAProjection,
  NonIntegral,
  NotAntisymmetric,
  DepthExhausted,
  PreconditionFailed,
  NotSplit,
  ZeroAlgebra,
  DimCapExceeded,
  InvalidSystem,
  TrivialAutomorphism,
  MissingRootOfUnity,
  NotAMatching,
  NotAPartition,
  NotPrimeDegree,
  SmoothDivisorTooSmall,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace sf
