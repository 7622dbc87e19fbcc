#pragma once

#include <stdexcept>
#include <string>

namespace gustrata {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad prime, out-of-range index, unparsable module spec.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// (p, d, N) too large for the configured arithmetic capacity.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class NotInvertible : public Error {
 public:
  NotInvertible(int valuation)
      : Error("non-invertible, valuation " + std::to_string(valuation)), valuation_(valuation) {}
  int valuation() const { return valuation_; }

 private:
  int valuation_;
};

/// A result could not be certified at the working precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive sweep larger than the configured point budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace gustrata
