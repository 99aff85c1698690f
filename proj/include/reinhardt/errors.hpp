#pragma once

// Exception types shared by every module. Callers that only care about
// "something was wrong with my input" can catch std::invalid_argument.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace reinhardt {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A composition whose star path does not close, i.e. not the composition of
// a Reinhardt polynomial.
class InvalidComposition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidGeometry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// No (p, q, r) factorisation with distinct odd primes p, q and r >= 2.
class UnsupportedN : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a result that is guaranteed by construction fails to verify.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double estimated, double budget)
      : std::runtime_error(what), estimated_(estimated), budget_(budget) {}

  double estimated_cost() const noexcept { return estimated_; }
  double budget() const noexcept { return budget_; }

 private:
  double estimated_;
  double budget_;
};

}  // namespace reinhardt
