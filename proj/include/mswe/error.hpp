#pragma once

#include <stdexcept>
#include <string>

namespace mswe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad degree, index, mesh size or configuration value.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A field was passed where a different discrete space was required.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// Iterations that failed to converge, singular diagnostics, blow-up.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public NumericalFailure {
 public:
  NonConvergence(const std::string& what, int iterations, double residual)
      : NumericalFailure(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Non-finite or out-of-range state after a time step.
class BlowUp : public NumericalFailure {
 public:
  BlowUp(const std::string& what, long step) : NumericalFailure(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace mswe
