#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mqf {

enum class ErrorKind {
  EmptyPrimeList,
  NotSquarefree,
  DegenerateField,
  PairwiseCoprimeRequired,
  FieldMismatch,
  InternalNonRational,
  NotTotallyPositive,
  NotIntegral,
  WrongDegree,
  UnsupportedResidueClass,
  PerfectSquare,
  DegeneratePart,
  BaseWitnessNotFound,
  Parse,
  Format,
  Internal,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyPrimeList: return "EmptyPrimeList";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::DegenerateField: return "DegenerateField";
    case ErrorKind::PairwiseCoprimeRequired: return "PairwiseCoprimeRequired";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::InternalNonRational: return "InternalNonRational";
    case ErrorKind::NotTotallyPositive: return "NotTotallyPositive";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::WrongDegree: return "WrongDegree";
    case ErrorKind::UnsupportedResidueClass: return "UnsupportedResidueClass";
    case ErrorKind::PerfectSquare: return "PerfectSquare";
    case ErrorKind::DegeneratePart: return "DegeneratePart";
    case ErrorKind::BaseWitnessNotFound: return "BaseWitnessNotFound";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Format: return "Format";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` lets callers branch.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mqf
