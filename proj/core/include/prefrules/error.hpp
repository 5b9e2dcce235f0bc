#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prefrules {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two objects that must share a dimension (e.g. label count) do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A ranking does not belong to the domain an operation requires
/// (e.g. ties passed to plain Kendall tau).
class InvalidOrderError : public Error {
 public:
  using Error::Error;
};

/// A coefficient or measure whose denominator vanishes.
class UndefinedError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Preference relations that contain a cycle.
class CycleError : public Error {
 public:
  using Error::Error;
};

class UnsupportedTargetError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based data row when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Input is well formed but does not have the required columns.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A saved model does not fit the data it is applied to.
class ModelMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace prefrules
