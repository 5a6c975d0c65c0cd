#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symcone {

enum class ErrorKind {
  MalformedInput,
  Configuration,
  Definiteness,
  Precondition,
  Domain,
  ModelInconsistency,
  Singularity,
  SearchFailure,
  BoundViolation,
  Liveness,
  WrongMove,
  Connectivity,
  Positivity,
  Range,
  NumericalFailure,
  PropertyViolation,
  Build,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedInput: return "malformed-input";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Definiteness: return "definiteness";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::ModelInconsistency: return "model-inconsistency";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::SearchFailure: return "search-failure";
    case ErrorKind::BoundViolation: return "bound-violation";
    case ErrorKind::Liveness: return "liveness";
    case ErrorKind::WrongMove: return "wrong-move";
    case ErrorKind::Connectivity: return "connectivity";
    case ErrorKind::Positivity: return "positivity";
    case ErrorKind::Range: return "range";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::PropertyViolation: return "property-violation";
    case ErrorKind::Build: return "build";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace symcone
