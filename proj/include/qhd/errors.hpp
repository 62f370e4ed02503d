#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qhd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input value violates its documented domain. `field()` names the offender.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numeric argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Squared moduli of the initial state do not sum to one.
class NormalizationError : public Error {
 public:
  NormalizationError(double norm_squared, const std::string& what)
      : Error(what), norm_squared_(norm_squared) {}
  double norm_squared() const noexcept { return norm_squared_; }

 private:
  double norm_squared_;
};

/// A closed-form expression has a vanishing denominator.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on inputs that break its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A simulation produced a non-finite value.
class NumericError : public Error {
 public:
  NumericError(std::size_t generation, const std::string& what)
      : Error(what), generation_(generation) {}
  std::size_t generation() const noexcept { return generation_; }

 private:
  std::size_t generation_;
};

}  // namespace qhd
