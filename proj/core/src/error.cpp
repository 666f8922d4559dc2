#include "nlheat/error.hpp"

namespace nlheat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::KernelRejected: return "kernel-rejected";
    case ErrorCode::DegenerateGrid: return "degenerate-grid";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::InvalidSigma: return "invalid-sigma";
    case ErrorCode::InvalidRadius: return "invalid-radius";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::IncompleteField: return "incomplete-field";
    case ErrorCode::IncompatibleFields: return "incompatible-fields";
    case ErrorCode::DomainViolation: return "domain-violation";
    case ErrorCode::AssemblyFailure: return "assembly-failure";
    case ErrorCode::SpectralFailure: return "spectral-failure";
    case ErrorCode::SolverFailure: return "solver-failure";
    case ErrorCode::HypothesisNotMet: return "hypothesis-not-met";
    case ErrorCode::HypothesisViolation: return "hypothesis-violation";
    case ErrorCode::DichotomyViolation: return "dichotomy-violation";
    case ErrorCode::EmptyCylinder: return "empty-cylinder";
    case ErrorCode::ConfigError: return "config-error";
    case ErrorCode::IoError: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace nlheat
