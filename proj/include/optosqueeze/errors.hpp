#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace optosqueeze {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// More than one locally stable classical branch exists for the requested drive.
class BranchAmbiguityError : public Error {
 public:
  BranchAmbiguityError(const std::string& what, std::vector<double> branches)
      : Error(what), branches_(std::move(branches)) {}
  const std::vector<double>& branches() const noexcept { return branches_; }

 private:
  std::vector<double> branches_;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// Fock-space problem does not fit the configured size budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Physical approximation outside its range of validity.
class ValidityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace optosqueeze
