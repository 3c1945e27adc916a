#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kolmo {

// Numeric values double as the CLI exit codes.
enum class ErrorCode : int {
  parse = 1,
  precondition = 2,
  invariant = 3,
  budget = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::parse, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorCode::precondition, what) {}
};

class DimensionError : public PreconditionError {
 public:
  DimensionError(std::size_t expected, std::size_t got, const std::string& where)
      : PreconditionError(where + ": dimension mismatch (expected " +
                          std::to_string(expected) + ", got " + std::to_string(got) + ")"),
        expected_(expected),
        got_(got) {}
  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(ErrorCode::invariant, what) {}
};

class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, double minimum_budget)
      : Error(ErrorCode::budget, what), minimum_budget_(minimum_budget) {}
  /// Smallest budget the failing construction could have met; 0 when unknown.
  double minimum_budget() const noexcept { return minimum_budget_; }

 private:
  double minimum_budget_;
};

}  // namespace kolmo
