#pragma once

#include <stdexcept>
#include <string>

namespace twosided {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside the mathematical domain of an operation
// (non-positive duration, cost value outside the range of w, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A documented precondition does not hold (infeasible instance handed to a
// scheduler, schedule of the wrong length, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The feasible region of an optimization problem is empty.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The energy budget cannot complete the transmissions by the end time.
class InsufficientBudget : public Error {
 public:
  InsufficientBudget(double required, double available)
      : Error("insufficient energy budget: need at least " + std::to_string(required) +
              ", have " + std::to_string(available)),
        required_(required),
        available_(available) {}

  // Minimal budget that completes all packets by the end time.
  double required() const noexcept { return required_; }
  double available() const noexcept { return available_; }

 private:
  double required_;
  double available_;
};

}  // namespace twosided
