#pragma once

#include <stdexcept>
#include <string>

namespace citepred {

/// Input did not satisfy a documented precondition or schema.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A row of an input file could not be turned into a record.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ", field '" + field +
                        "': " + what),
        line_(line),
        field_(std::move(field)) {}
  /// Same error with the input name prepended to the message.
  ParseError(const std::string& source, const ParseError& inner)
      : ValidationError(source + ": " + inner.what()), line_(inner.line_), field_(inner.field_) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// The numbers are well-formed but the requested quantity does not exist
/// (singular design, empty stratum, perfect-leverage point, ...).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientDataError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class RankDeficientError : public ComputationError {
 public:
  RankDeficientError(std::string column, const std::string& what)
      : ComputationError(what), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class DegenerateResponseError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class PerfectLeverageError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class BaselineUnavailableError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace citepred
