#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subharmonic {

enum class ErrorKind {
  // integrator
  StepLimitExceeded,
  StepUnderflow,
  EventNotFound,
  // unperturbed
  OutOfRange,
  Unattainable,
  NoConvergence,
  // melnikov
  SpecMismatch,
  NoSimpleZeros,
  // solvers
  InconsistentMonodromy,
  TangentialCrossing,
  StepTooSmall,
  // configuration / usage
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for every numerical failure; `kind()` discriminates.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace subharmonic
