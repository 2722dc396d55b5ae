#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crnlap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally invalid input (bad indices, non-positive weights, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Reaction file syntax error. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A theorem hypothesis required by the operation does not hold.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// A numeric check that must pass in exact arithmetic failed at the
/// configured tolerance.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Reference equilibrium for a Lyapunov computation is not complex balanced.
class InvalidReference : public Error {
 public:
  using Error::Error;
};

}  // namespace crnlap
