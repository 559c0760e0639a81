#pragma once

#include <stdexcept>
#include <string>

namespace ldg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (non-unit director, bad B tensor, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Material or reduced parameters outside their admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (negative amplitude, r > R, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at (or too close to) the defect at the origin.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (grid too coarse, quadrature order too low, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration for the profile ODE did not converge.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// Gradient flow increased the energy beyond tolerance (time step too large).
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during the gradient flow.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldg
