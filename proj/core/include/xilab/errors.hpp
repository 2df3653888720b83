#pragma once

#include <stdexcept>
#include <string>

namespace xilab {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The caller asked for something the contract does not allow
/// (unsupported derivative order, bad tolerance, empty bracket, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A series or quadrature could not reach the requested tolerance within
/// its budget. Carries the best value and bound obtained so far.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value, double best_bound)
      : Error(what), best_value_(best_value), best_bound_(best_bound) {}

  double best_value() const noexcept { return best_value_; }
  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_value_;
  double best_bound_;
};

/// The p/q interval sum did not cover the support of the integrand.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, double partial_tail_bound)
      : Error(what), partial_tail_bound_(partial_tail_bound) {}

  double partial_tail_bound() const noexcept { return partial_tail_bound_; }

 private:
  double partial_tail_bound_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace xilab
