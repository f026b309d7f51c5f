#pragma once

#include <stdexcept>
#include <string>

namespace semijulia {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root finder gave up; carries the worst relative residual seen.
class RootFindError : public NumericError {
 public:
  RootFindError(const std::string& what, double worst_residual)
      : NumericError(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

// P and Q vanish together: the map is not in lowest terms at this point.
class IndeterminateError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegreeCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A fiber prefix ran out before the orbit escaped.
class PrefixExhausted : public NumericError {
 public:
  using NumericError::NumericError;
};

// A work budget (tree nodes, leaves) was exceeded.
class BudgetExceeded : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace semijulia
