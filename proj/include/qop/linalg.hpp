#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qop/tolerances.hpp"

namespace qop::linalg {

using Complex = std::complex<double>;

// Dense complex matrix with row-major storage. Values are immutable once
// built except through the element accessor; all library operations treat
// matrices as values.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  const std::vector<Complex>& entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  std::vector<Complex> apply(const std::vector<Complex>& v) const;

  std::vector<Complex> column(std::size_t c) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex s, ComplexMatrix m);

// <a|b>, conjugating the left argument.
Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b);
double vector_norm(const std::vector<Complex>& a);
// |a><b|
ComplexMatrix outer(const std::vector<Complex>& a, const std::vector<Complex>& b);

// Square matrix checked against m = m^dagger on construction and stored in
// exactly Hermitian form (entries averaged with their conjugates).
class HermitianMatrix {
 public:
  // tol < 0 selects the scale-aware default.
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = -1.0);

  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix zero(std::size_t n);
  static HermitianMatrix from_diagonal(const std::vector<double>& d);

  std::size_t dim() const { return m_.rows(); }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const ComplexMatrix& matrix() const { return m_; }

  Complex trace() const { return m_.trace(); }
  double max_abs() const { return m_.max_abs(); }
  std::vector<double> real_diagonal() const;

 private:
  struct Unchecked {};
  HermitianMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;

  friend HermitianMatrix hermitian_unchecked(ComplexMatrix m);
};

// Internal fast path for matrices that are Hermitian by construction.
HermitianMatrix hermitian_unchecked(ComplexMatrix m);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // unitary; column i pairs with eigenvalues[i]
};

struct PsdReport {
  bool positive = false;
  double min_eigenvalue = 0.0;
  double tol = kPsdTol;
};

// Cyclic complex Jacobi diagonalization. Matrices in this artifact are
// small (dim <~ 64), so robustness wins over asymptotics.
EigenDecomposition hermitian_eig(const HermitianMatrix& m);

PsdReport psd_check(const HermitianMatrix& m, double tol = kPsdTol);

// Factors a PSD matrix p as C^dagger C with m_rows rows (0 selects dim).
// Requires m_rows >= rank(p).
ComplexMatrix factor_psd(const HermitianMatrix& p, std::size_t m_rows = 0);

// Eigenvalue count above the scale-aware rank cutoff.
std::size_t psd_rank(const HermitianMatrix& p);

// Elementwise (Schur) product and elementwise reciprocal.
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hadamard_inverse(const ComplexMatrix& a, double zero_tol = kZeroTol);

// Eigenvalue clipping onto the PSD cone.
HermitianMatrix psd_clip(const HermitianMatrix& m);

// Principal square root of a PSD matrix; eigenvalues below -tol are a
// domain error, small negatives are clipped to zero.
HermitianMatrix psd_sqrt(const HermitianMatrix& m, double tol = kPsdTol);

// Inverse through the eigendecomposition; eigenvalues with |lambda| <=
// cutoff are a domain error.
HermitianMatrix hermitian_inverse(const HermitianMatrix& m, double cutoff = kZeroTol);

}  // namespace qop::linalg
