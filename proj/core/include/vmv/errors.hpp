#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vmv {

/// Base class for failures of a numerical procedure on valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double achieved)
      : NumericalError(what + " (achieved tolerance " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// A kernel power that is not integrable on the probed interval.
class NonIntegrableError : public NumericalError {
 public:
  NonIntegrableError(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Series whose terms fail to decay.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Non-finite particle state produced by a simulation.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, std::size_t step)
      : NumericalError(what + " at step " + std::to_string(step)), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace vmv
