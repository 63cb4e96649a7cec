#pragma once

#include <stdexcept>
#include <string>

namespace rrb {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or configuration value was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// No grid point of the current round lies in the surviving region.
class NoActiveArms : public Error {
 public:
  using Error::Error;
};

/// A sample budget would be exceeded by the next requested batch.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or config.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Unknown key, wrong type or out-of-range value in an experiment spec.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rrb
