#include "qop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "qop/error.hpp"

namespace qop::linalg {

namespace {

void check_finite(const std::vector<Complex>& entries) {
  for (const Complex& z : entries) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError("matrix entries must be finite");
    }
  }
}

std::string shape_string(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {
  if (rows == 0 || cols == 0) {
    throw DomainError("matrix dimensions must be at least 1x1");
  }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw DomainError("matrix dimensions must be at least 1x1");
  }
  if (entries_.size() != rows * cols) {
    throw DomainError("entry count does not match " + shape_string(rows, cols));
  }
  check_finite(entries_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DomainError("ragged row list");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(r, c, std::move(entries));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out(j, i) = std::conj((*this)(i, j));
    }
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  if (rows_ != cols_) throw DomainError("trace of a non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

std::vector<Complex> ComplexMatrix::apply(const std::vector<Complex>& v) const {
  if (v.size() != cols_) throw DomainError("matrix-vector shape mismatch");
  std::vector<Complex> out(rows_, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < rows_; ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

std::vector<Complex> ComplexMatrix::column(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw DomainError("shape mismatch in matrix addition");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw DomainError("shape mismatch in matrix subtraction");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (Complex& z : entries_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
  lhs += rhs;
  return lhs;
}

ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
  lhs -= rhs;
  return lhs;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DomainError("shape mismatch in matrix product");
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) {
        out(i, j) += a * rhs(k, j);
      }
    }
  }
  return out;
}

ComplexMatrix operator*(Complex s, ComplexMatrix m) {
  m *= s;
  return m;
}

Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw DomainError("inner product of unequal lengths");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double vector_norm(const std::vector<Complex>& a) {
  double s = 0.0;
  for (const Complex& z : a) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix outer(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  ComplexMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out(i, j) = a[i] * std::conj(b[j]);
    }
  }
  return out;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) : m_(m) {
  if (m.rows() != m.cols()) {
    throw DomainError("Hermitian matrix must be square, got " +
                      shape_string(m.rows(), m.cols()));
  }
  const double t = tol < 0.0 ? scaled_tol(m.rows(), m.max_abs()) : tol;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (std::abs(m(i, i).imag()) > t) {
      throw DomainError("diagonal entry " + std::to_string(i) + " is not real");
    }
    for (std::size_t j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > t) {
        throw DomainError("matrix is not Hermitian at (" + std::to_string(i) +
                          "," + std::to_string(j) + ")");
      }
    }
  }
  // Store the exactly Hermitian average so downstream code never sees drift.
  for (std::size_t i = 0; i < m.rows(); ++i) {
    m_(i, i) = Complex(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = avg;
      m_(j, i) = std::conj(avg);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  return hermitian_unchecked(ComplexMatrix::identity(n));
}

HermitianMatrix HermitianMatrix::zero(std::size_t n) {
  return hermitian_unchecked(ComplexMatrix(n, n));
}

HermitianMatrix HermitianMatrix::from_diagonal(const std::vector<double>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return hermitian_unchecked(std::move(m));
}

std::vector<double> HermitianMatrix::real_diagonal() const {
  std::vector<double> d(dim());
  for (std::size_t i = 0; i < dim(); ++i) d[i] = m_(i, i).real();
  return d;
}

HermitianMatrix hermitian_unchecked(ComplexMatrix m) {
  return HermitianMatrix(std::move(m), HermitianMatrix::Unchecked{});
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
  }
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition hermitian_eig(const HermitianMatrix& hm) {
  const std::size_t n = hm.dim();
  ComplexMatrix a = hm.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = a.max_abs();
  if (scale > 0.0 && n > 1) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double target = 50.0 * static_cast<double>(n) * eps * scale;
    constexpr int kMaxSweeps = 100;

    int sweep = 0;
    while (off_diagonal_norm(a) > target) {
      if (++sweep > kMaxSweeps) {
        throw SolverError("Jacobi eigensolver did not converge",
                          off_diagonal_norm(a));
      }
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const Complex beta = a(p, q);
          const double r = std::abs(beta);
          if (r <= eps * scale) continue;

          // Zero a(p,q) with the plane rotation
          //   U = [[c, s e^{i phi}], [-s e^{-i phi}, c]],  phi = arg(beta).
          // After factoring out the phase this is the real Jacobi rotation
          // with tan(2t) = 2r / (a_qq - a_pp).
          const Complex eiphi = beta / r;
          const double alpha = a(p, p).real();
          const double gamma = a(q, q).real();
          const double theta = (gamma - alpha) / (2.0 * r);
          const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;

          // A <- A U
          for (std::size_t i = 0; i < n; ++i) {
            const Complex aip = a(i, p);
            const Complex aiq = a(i, q);
            a(i, p) = c * aip - s * std::conj(eiphi) * aiq;
            a(i, q) = s * eiphi * aip + c * aiq;
          }
          // A <- U^dagger A
          for (std::size_t j = 0; j < n; ++j) {
            const Complex apj = a(p, j);
            const Complex aqj = a(q, j);
            a(p, j) = c * apj - s * eiphi * aqj;
            a(q, j) = s * std::conj(eiphi) * apj + c * aqj;
          }
          // V <- V U
          for (std::size_t i = 0; i < n; ++i) {
            const Complex vip = v(i, p);
            const Complex viq = v(i, q);
            v(i, p) = c * vip - s * std::conj(eiphi) * viq;
            v(i, q) = s * eiphi * vip + c * viq;
          }

          a(p, q) = 0.0;
          a(q, p) = 0.0;
          a(p, p) = Complex(a(p, p).real(), 0.0);
          a(q, q) = Complex(a(q, q).real(), 0.0);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

PsdReport psd_check(const HermitianMatrix& m, double tol) {
  if (tol < 0.0) throw DomainError("psd_check tolerance must be nonnegative");
  const EigenDecomposition eig = hermitian_eig(m);
  const double min_eig = eig.eigenvalues.back();
  return PsdReport{min_eig >= -tol, min_eig, tol};
}

namespace {

double rank_cutoff(const HermitianMatrix& p, const std::vector<double>& eigenvalues) {
  const double lambda_max =
      eigenvalues.empty() ? 0.0 : std::abs(eigenvalues.front());
  return std::max(kZeroTol, scaled_tol(p.dim(), lambda_max));
}

}  // namespace

std::size_t psd_rank(const HermitianMatrix& p) {
  const EigenDecomposition eig = hermitian_eig(p);
  const double cutoff = rank_cutoff(p, eig.eigenvalues);
  std::size_t r = 0;
  for (double lambda : eig.eigenvalues) {
    if (lambda > cutoff) ++r;
  }
  return r;
}

ComplexMatrix factor_psd(const HermitianMatrix& p, std::size_t m_rows) {
  const EigenDecomposition eig = hermitian_eig(p);
  const double min_eig = eig.eigenvalues.back();
  if (min_eig < -kPsdTol) {
    throw DomainError("factor_psd requires a positive semidefinite matrix "
                      "(min eigenvalue " + std::to_string(min_eig) + ")");
  }

  const double cutoff = rank_cutoff(p, eig.eigenvalues);
  std::size_t rank = 0;
  for (double lambda : eig.eigenvalues) {
    if (lambda > cutoff) ++rank;
  }

  const std::size_t rows = m_rows == 0 ? p.dim() : m_rows;
  if (rows < rank) {
    throw DomainError("factor_psd: requested " + std::to_string(rows) +
                      " rows but the matrix has rank " + std::to_string(rank));
  }

  // C = diag(sqrt(lambda)) U^dagger restricted to the positive eigenvalues.
  ComplexMatrix c(rows, p.dim());
  for (std::size_t k = 0; k < rank; ++k) {
    const double w = std::sqrt(std::max(eig.eigenvalues[k], 0.0));
    for (std::size_t j = 0; j < p.dim(); ++j) {
      c(k, j) = w * std::conj(eig.eigenvectors(j, k));
    }
  }
  return c;
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DomainError("Hadamard product of mismatched shapes " +
                      shape_string(a.rows(), a.cols()) + " and " +
                      shape_string(b.rows(), b.cols()));
  }
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) * b(i, j);
  }
  return out;
}

ComplexMatrix hadamard_inverse(const ComplexMatrix& a, double zero_tol) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j)) < zero_tol) {
        throw DomainError("Hadamard inverse of a zero entry at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      }
      out(i, j) = 1.0 / a(i, j);
    }
  }
  return out;
}

HermitianMatrix psd_clip(const HermitianMatrix& m) {
  const EigenDecomposition eig = hermitian_eig(m);
  const std::size_t n = m.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = std::max(eig.eigenvalues[k], 0.0);
    if (lambda == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex ui = eig.eigenvectors(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        out(i, j) += lambda * ui * std::conj(eig.eigenvectors(j, k));
      }
    }
  }
  return hermitian_unchecked(std::move(out));
}

HermitianMatrix psd_sqrt(const HermitianMatrix& m, double tol) {
  const EigenDecomposition eig = hermitian_eig(m);
  if (eig.eigenvalues.back() < -tol) {
    throw DomainError("psd_sqrt of a matrix with min eigenvalue " +
                      std::to_string(eig.eigenvalues.back()));
  }
  const std::size_t n = m.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::sqrt(std::max(eig.eigenvalues[k], 0.0));
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex ui = eig.eigenvectors(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        out(i, j) += w * ui * std::conj(eig.eigenvectors(j, k));
      }
    }
  }
  return hermitian_unchecked(std::move(out));
}

HermitianMatrix hermitian_inverse(const HermitianMatrix& m, double cutoff) {
  const EigenDecomposition eig = hermitian_eig(m);
  const std::size_t n = m.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(eig.eigenvalues[k]) <= cutoff) {
      throw DomainError("hermitian_inverse of a singular matrix (eigenvalue " +
                        std::to_string(eig.eigenvalues[k]) + ")");
    }
    const double w = 1.0 / eig.eigenvalues[k];
    for (std::size_t i = 0; i < n; ++i) {
      const Complex ui = eig.eigenvectors(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        out(i, j) += w * ui * std::conj(eig.eigenvectors(j, k));
      }
    }
  }
  return hermitian_unchecked(std::move(out));
}

}  // namespace qop::linalg
