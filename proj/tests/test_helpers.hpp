#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qop/linalg.hpp"
#include "qop/states.hpp"

namespace testutil {

using qop::linalg::Complex;
using qop::linalg::ComplexMatrix;

inline bool close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol;
}

inline bool close(const Complex& a, const Complex& b, double tol = 1e-9) {
  return std::abs(a - b) <= tol;
}

inline bool matrix_close(const ComplexMatrix& a, const ComplexMatrix& b,
                         double tol = 1e-9) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).frobenius_norm() <= tol;
}

// Two states in dim 2 with the given real overlap.
inline qop::states::PureStateSet overlap_pair(double gamma) {
  const double ortho = std::sqrt(1.0 - gamma * gamma);
  return qop::states::PureStateSet(
      2, {{Complex(1.0, 0.0), Complex(0.0, 0.0)},
          {Complex(gamma, 0.0), Complex(ortho, 0.0)}});
}

inline std::vector<Complex> basis_state(std::size_t dim, std::size_t k) {
  std::vector<Complex> v(dim, Complex(0.0, 0.0));
  v[k] = 1.0;
  return v;
}

}  // namespace testutil
