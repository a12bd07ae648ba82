#pragma once

#include <stdexcept>
#include <string>

namespace besovlab {

/// Base of every error the library throws. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A request needs finer resolution than the grid carries (level > J, t < dx).
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment / generator / family description.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for the requested exact mode.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Unparseable or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite or otherwise unusable value.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace besovlab
