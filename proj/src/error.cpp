#include "imapk/error.hpp"

namespace imapk {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::MixedFieldContexts: return "MixedFieldContexts";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::ReducibleMinPoly: return "ReducibleMinPoly";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::PartitionNotIncreasing: return "PartitionNotIncreasing";
    case ErrorKind::EndpointsNotZeroOne: return "EndpointsNotZeroOne";
    case ErrorKind::BranchImageOutsideUnitInterval: return "BranchImageOutsideUnitInterval";
    case ErrorKind::ZeroSlope: return "ZeroSlope";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NotAnExchangeMap: return "NotAnExchangeMap";
    case ErrorKind::LengthExceedsCap: return "LengthExceedsCap";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotZeroOne: return "NotZeroOne";
    case ErrorKind::NonIntegerDependence: return "NonIntegerDependence";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::InconsistentCaseData: return "InconsistentCaseData";
    case ErrorKind::CyclicityNotEstablished: return "CyclicityNotEstablished";
    case ErrorKind::WrongFamily: return "WrongFamily";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::UnrealizableMatrix: return "UnrealizableMatrix";
    case ErrorKind::HypothesisViolatedWithinCap: return "HypothesisViolatedWithinCap";
    case ErrorKind::RefusedWithoutAssertion: return "RefusedWithoutAssertion";
    case ErrorKind::InvalidMarkovPartition: return "InvalidMarkovPartition";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::SemanticError: return "SemanticError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace imapk
