#pragma once

#include <stdexcept>
#include <string>

namespace mvrelax {

// Base of every error raised by the library. `code()` is a stable, machine
// readable identifier used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  [[nodiscard]] const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Violated precondition on user-provided data (problem definition, config).
class InvalidInput : public Error {
 public:
  InvalidInput(std::string code, const std::string& what)
      : Error(std::move(code), what) {}
};

// Arrays defined on different space-time grids were combined.
class GridMismatch : public Error {
 public:
  explicit GridMismatch(const std::string& what)
      : Error("grid-mismatch", what) {}
};

class NumericalFailure : public Error {
 public:
  NumericalFailure(std::string code, const std::string& what)
      : Error(std::move(code), what) {}
};

class NewtonDivergence : public NumericalFailure {
 public:
  explicit NewtonDivergence(const std::string& what)
      : NumericalFailure("newton-divergence", what) {}
};

class SingularJacobian : public NumericalFailure {
 public:
  explicit SingularJacobian(const std::string& what)
      : NumericalFailure("singular-jacobian", what) {}
};

class NumericalBreakdown : public NumericalFailure {
 public:
  explicit NumericalBreakdown(const std::string& what)
      : NumericalFailure("numerical-breakdown", what) {}
};

}  // namespace mvrelax
