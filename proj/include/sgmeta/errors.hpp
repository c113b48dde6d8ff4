// Exception types shared across modules.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sgmeta {

/// Operation requested outside the γβ regime it is defined for.
class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative method failed; carries the residual (or objective) history.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Stationary point does not have the Hessian signature an operation needs.
class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgmeta
