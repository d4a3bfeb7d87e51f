#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsi {

/// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string what)
      : Error("parse error at row " + std::to_string(row) + ": " + what), row_(row) {}
  ParseError(std::size_t row, std::size_t column, std::string what)
      : Error("parse error at row " + std::to_string(row) + ", column " +
              std::to_string(column) + ": " + what),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  /// Zero when the error is not tied to a specific column.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_ = 0;
  std::size_t column_ = 0;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class InvalidDataset : public Error {
 public:
  using Error::Error;
};

/// Fewer than two distinct classes where a separability computation needs two.
class DegenerateDataset : public Error {
 public:
  using Error::Error;
};

/// A class (or one side of a BCD pair) too small for the requested distance set.
class DegenerateClass : public Error {
 public:
  using Error::Error;
};

class DegenerateSubset : public Error {
 public:
  using Error::Error;
};

class DegenerateVector : public Error {
 public:
  using Error::Error;
};

class SingularCovariance : public Error {
 public:
  using Error::Error;
};

class EmptySample : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IntegrityError : public Error {
 public:
  using Error::Error;
};

class FetchError : public Error {
 public:
  using Error::Error;
};

/// Raised when an exact computation would materialize more distances than allowed.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace dsi
