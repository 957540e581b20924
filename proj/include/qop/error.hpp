#pragma once

#include <stdexcept>
#include <string>

namespace qop {

// A mathematical precondition does not hold (shape mismatch, failed
// domain condition, conditioning on a null event, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver hit its iteration cap; carries the final residual.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace qop
