#pragma once

#include <stdexcept>
#include <string>

namespace eqloc {

/// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance failed validation; the message lists each violation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, std::size_t column, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Geometry was required but at least one block or site lacks coordinates.
class MissingCoordinates : public Error {
 public:
  using Error::Error;
};

/// Every population-weighted baseline distance is zero, so alpha is undefined.
/// The instance already has perfect access; callers treat the EDE as 0.
class DegenerateDistances : public Error {
 public:
  using Error::Error;
};

/// Requested more new sites than there are candidates.
class BudgetExceedsCandidates : public Error {
 public:
  using Error::Error;
};

/// Plans handed to a comparison do not share the baseline they are compared against.
class MismatchedBaseline : public Error {
 public:
  using Error::Error;
};

/// Exponentiated costs span more than a double can hold even after shifting.
class NumericRange : public Error {
 public:
  using Error::Error;
};

}  // namespace eqloc
