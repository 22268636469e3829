#pragma once

#include <stdexcept>
#include <string>

namespace tfhom {

// Every error raised by the library derives from tfhom::Error so callers
// (the CLI in particular) can separate operational failures from bugs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inconsistent solver configuration (CFL, flux viscosity, grid resolution).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Two arrays that must share a grid do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input data does not satisfy the regularity it was declared to have.
class CertificationError : public Error {
 public:
  using Error::Error;
};

// A rate fit with nonpositive errors or too few points.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

}  // namespace tfhom
