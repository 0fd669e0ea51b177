#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdetect {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Bad input: malformed spec, out-of-range index, violated precondition.
class ValidationError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "validation"; }
};

/// A numerical guarantee could not be certified (solver failure, rank loss).
class NumericalError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical"; }
};

/// The barrier selection found no unused index satisfying the feasibility
/// condition, even after refactorizing the running operator.
class NoFeasibleCandidate : public NumericalError {
public:
  NoFeasibleCandidate(std::size_t step, double min_condition, double margin);

  std::size_t step() const noexcept { return step_; }
  double min_condition() const noexcept { return min_condition_; }
  double margin() const noexcept { return margin_; }
  const char* kind() const noexcept override { return "no_feasible_candidate"; }

private:
  std::size_t step_;
  double min_condition_;
  double margin_;
};

} // namespace fdetect
