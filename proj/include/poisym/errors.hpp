#pragma once

#include <stdexcept>
#include <string>

namespace poisym {

/// Caller broke a documented precondition (wrong dimension, repeated index, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value left the domain where the formula is defined, e.g. a non-finite
/// bivector component or H < 1 for a unimodular matrix.
class NumericDomainError : public std::domain_error {
 public:
  NumericDomainError(const std::string& what, int index = -1)
      : std::domain_error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// Step-size control could not meet the tolerance above the minimum step.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// State became non-finite; `last_good_time` is the last accepted sample.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario configuration. `path` names the offending field, e.g. "params.epsilon".
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace poisym
