#pragma once

#include <stdexcept>
#include <string>

namespace pcmlead {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (matrix files, experiment configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A structural invariant does not hold: reciprocity, positivity, scale bound.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Operands of incompatible sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A well-formed request outside an operation's domain (bad index, bad tie).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcmlead
