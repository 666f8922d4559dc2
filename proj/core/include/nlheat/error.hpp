#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlheat {

enum class ErrorCode {
  InvalidParameter,
  KernelRejected,
  DegenerateGrid,
  OutOfDomain,
  InvalidSigma,
  InvalidRadius,
  OutOfRange,
  IncompleteField,
  IncompatibleFields,
  DomainViolation,
  AssemblyFailure,
  SpectralFailure,
  SolverFailure,
  HypothesisNotMet,
  HypothesisViolation,
  DichotomyViolation,
  EmptyCylinder,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace nlheat
