#pragma once

#include <cstddef>

namespace qop {

// Default absolute tolerance for positive-semidefiniteness verdicts.
inline constexpr double kPsdTol = 1e-9;

// Entries with modulus below this are treated as exact zeros.
inline constexpr double kZeroTol = 1e-12;

// Scale-aware tolerance used for Hermiticity checks and reconstruction
// residuals: 1e-10 * dim * max|entry|.
inline double scaled_tol(std::size_t dim, double max_abs) {
  return 1e-10 * static_cast<double>(dim) * max_abs;
}

}  // namespace qop
