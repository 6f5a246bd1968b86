#pragma once

#include <stdexcept>
#include <string>

namespace postlie {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Operation outside its domain of validity (e.g. BCH radius exceeded).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Principal matrix logarithm undefined: an eigenvalue lies on the closed
/// negative real axis.
class BranchError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A fixed-point or series iteration failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

/// Integrator state became non-finite.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class UnsupportedSpecError : public Error {
 public:
  using Error::Error;
};

/// PBW elements from different algebras (U(g) vs U(gbar), or different
/// structure constants) were combined.
class TagMismatchError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace postlie
