#pragma once

#include <stdexcept>
#include <string>

namespace posim {

// Domain-error taxonomy. CLI maps every DomainError to exit code 1 and the
// message always starts with the variant name, so scripts can match on it.
enum class ErrorKind {
  CycleDetected,
  SelfLoop,
  EmptyInput,
  ParseError,
  DomainMismatch,
  DegenerateOrder,
  AllEmptyDownSets,
  RangeViolation,
  InfeasibleSpec,
  LinkCountMismatch,
  NotTotalOrder,
  ExtensionCapExceeded,
  NotRooted,
  Overflow,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::CycleDetected:        return "CycleDetected";
    case ErrorKind::SelfLoop:             return "SelfLoop";
    case ErrorKind::EmptyInput:           return "EmptyInput";
    case ErrorKind::ParseError:           return "ParseError";
    case ErrorKind::DomainMismatch:       return "DomainMismatch";
    case ErrorKind::DegenerateOrder:      return "DegenerateOrder";
    case ErrorKind::AllEmptyDownSets:     return "AllEmptyDownSets";
    case ErrorKind::RangeViolation:       return "RangeViolation";
    case ErrorKind::InfeasibleSpec:       return "InfeasibleSpec";
    case ErrorKind::LinkCountMismatch:    return "LinkCountMismatch";
    case ErrorKind::NotTotalOrder:        return "NotTotalOrder";
    case ErrorKind::ExtensionCapExceeded: return "ExtensionCapExceeded";
    case ErrorKind::NotRooted:            return "NotRooted";
    case ErrorKind::Overflow:             return "Overflow";
  }
  return "UnknownError";
}

class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& detail) {
  throw DomainError(kind, detail);
}

}  // namespace posim
