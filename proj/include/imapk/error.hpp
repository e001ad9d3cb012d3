#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace imapk {

enum class ErrorKind {
  DivisionByZero,
  MixedFieldContexts,
  InvalidField,
  ReducibleMinPoly,
  ParseError,
  PartitionNotIncreasing,
  EndpointsNotZeroOne,
  BranchImageOutsideUnitInterval,
  ZeroSlope,
  OutOfDomain,
  NotAnExchangeMap,
  LengthExceedsCap,
  NotSquare,
  NotZeroOne,
  NonIntegerDependence,
  NotSurjective,
  InconsistentCaseData,
  CyclicityNotEstablished,
  WrongFamily,
  ParameterOutOfRange,
  UnrealizableMatrix,
  HypothesisViolatedWithinCap,
  RefusedWithoutAssertion,
  InvalidMarkovPartition,
  SyntaxError,
  SemanticError,
};

std::string_view error_kind_name(ErrorKind kind);

/// Every failure in the library is reported through this type; `kind()` is
/// stable and is what the CLI prints as the error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace imapk
