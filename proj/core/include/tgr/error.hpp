#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tgr {

/// Base class for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: parse errors, invalid graphs or rules, unknown names.
/// The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A parse error with a 1-based source position.
class ParseError : public InputError {
 public:
  ParseError(std::string file, int line, int column, const std::string& message)
      : InputError(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                   message),
        file_(std::move(file)),
        line_(line),
        column_(column) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string file_;
  int line_;
  int column_;
};

/// An internal invariant was violated. Seeing one of these means the engine
/// (or a deliberately broken build of it) is wrong, not the input.
class EngineError : public Error {
 public:
  using Error::Error;
};

/// Residuals by a redex whose rule copies a variable infinitely often.
class InfiniteResidualError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed its configured size budget.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& message, std::size_t required)
      : Error(message), required_(required) {}
  std::size_t required() const { return required_; }

 private:
  std::size_t required_;
};

/// Outcome of a validation routine. Converts to true when no problem was found.
struct CheckResult {
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
  explicit operator bool() const { return ok(); }
  void fail(std::string message) { problems.push_back(std::move(message)); }
  void merge(const CheckResult& other, const std::string& prefix = {}) {
    for (const auto& p : other.problems) problems.push_back(prefix + p);
  }
  /// First problem or empty string.
  std::string first() const { return problems.empty() ? std::string{} : problems.front(); }
};

}  // namespace tgr
