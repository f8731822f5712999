#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ebv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition (bad dimension,
/// density out of range, worker count of zero, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed Matrix Market input. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A zero diagonal entry prevented unit-diagonal normalization. `row()` is 0-based.
class SingularDiagonalError : public Error {
 public:
  explicit SingularDiagonalError(std::size_t row)
      : Error("zero diagonal entry in row " + std::to_string(row)), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Pivot magnitude fell to or below the pivot threshold. `step()` is the
/// 1-based elimination step (the pivot's diagonal position).
class SingularPivotError : public Error {
 public:
  SingularPivotError(std::size_t step, double pivot)
      : Error("singular pivot at step " + std::to_string(step) + " (value " +
              std::to_string(pivot) + ")"),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace ebv
