#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace assoc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data: bad CSV, negative counts, an expectation
/// grid of the wrong shape, an empty table.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A statistic was requested on a table whose dimensions make it undefined
/// (for example V on a 1 x c table).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to an operation, as opposed to invalid data.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because it would visit more tables than
/// the configured budget allows. `required()` saturates at UINT64_MAX.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : Error(message(required, budget)), required_(required), budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  static std::string message(std::uint64_t required, std::uint64_t budget) {
    std::string need = required == UINT64_MAX ? "more than 18446744073709551614"
                                              : std::to_string(required);
    return "enumeration needs " + need + " tables, budget is " + std::to_string(budget);
  }

  std::uint64_t required_;
  std::uint64_t budget_;
};

}  // namespace assoc
