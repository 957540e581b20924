#include "qop/random.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qop/error.hpp"

namespace qop::rng {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

Complex gaussian(Engine& eng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return Complex(dist(eng), dist(eng));
}

std::vector<Complex> unit_vector(Engine& eng, std::size_t dim) {
  while (true) {
    std::vector<Complex> v(dim);
    for (Complex& z : v) z = gaussian(eng);
    const double n = linalg::vector_norm(v);
    if (n < 1e-6) continue;  // essentially never
    for (Complex& z : v) z /= n;
    return v;
  }
}

states::PureStateSet state_set(Engine& eng, std::size_t dim, std::size_t n) {
  std::vector<std::vector<Complex>> states;
  states.reserve(n);
  for (std::size_t j = 0; j < n; ++j) states.push_back(unit_vector(eng, dim));
  return states::PureStateSet(dim, std::move(states));
}

states::PureStateSet independent_state_set(Engine& eng, std::size_t dim,
                                           std::size_t n) {
  if (n > dim) throw DomainError("cannot draw more independent states than dim");
  while (true) {
    states::PureStateSet s = state_set(eng, dim, n);
    if (states::linearly_independent(s, 1e-4)) return s;
  }
}

ComplexMatrix matrix(Engine& eng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian(eng);
  }
  return m;
}

HermitianMatrix hermitian(Engine& eng, std::size_t dim) {
  const ComplexMatrix a = matrix(eng, dim, dim);
  return HermitianMatrix(Complex(0.5, 0.0) * (a + a.adjoint()));
}

HermitianMatrix psd(Engine& eng, std::size_t dim) {
  const ComplexMatrix b = matrix(eng, dim, dim);
  return HermitianMatrix(b.adjoint() * b);
}

HermitianMatrix correlation(Engine& eng, std::size_t dim) {
  const HermitianMatrix a = psd(eng, dim);
  ComplexMatrix out = a.matrix();
  std::vector<double> scale(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    scale[i] = 1.0 / std::sqrt(a(i, i).real());
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) out(i, j) *= scale[i] * scale[j];
  }
  return HermitianMatrix(out);
}

ComplexMatrix unitary(Engine& eng, std::size_t dim) {
  // Gram-Schmidt of a Gaussian matrix, columnwise.
  ComplexMatrix m = matrix(eng, dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<Complex> col = m.column(c);
    for (std::size_t prev = 0; prev < c; ++prev) {
      const std::vector<Complex> u = m.column(prev);
      const Complex overlap = linalg::inner(u, col);
      for (std::size_t i = 0; i < dim; ++i) col[i] -= overlap * u[i];
    }
    const double n = linalg::vector_norm(col);
    for (std::size_t i = 0; i < dim; ++i) m(i, c) = col[i] / n;
  }
  return m;
}

channel::DensityOperator density(Engine& eng, std::size_t dim) {
  const HermitianMatrix a = psd(eng, dim);
  ComplexMatrix m = a.matrix();
  m *= Complex(1.0 / a.trace().real(), 0.0);
  return channel::DensityOperator(linalg::hermitian_unchecked(std::move(m)));
}

std::vector<double> probability_vector(Engine& eng, std::size_t n) {
  std::exponential_distribution<double> dist(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) {
    x = dist(eng);
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

channel::KrausSet trace_preserving_kraus(Engine& eng, std::size_t dim,
                                         std::size_t m) {
  // Orthonormalize the columns of a (m*dim) x dim Gaussian block matrix;
  // the m stacked blocks then satisfy the completeness sum exactly.
  ComplexMatrix tall = matrix(eng, m * dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<Complex> col = tall.column(c);
    for (std::size_t prev = 0; prev < c; ++prev) {
      const std::vector<Complex> u = tall.column(prev);
      const Complex overlap = linalg::inner(u, col);
      for (std::size_t i = 0; i < col.size(); ++i) col[i] -= overlap * u[i];
    }
    const double n = linalg::vector_norm(col);
    for (std::size_t i = 0; i < col.size(); ++i) tall(i, c) = col[i] / n;
  }
  std::vector<ComplexMatrix> ops;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < m; ++k) {
    ComplexMatrix a(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) a(i, j) = tall(k * dim + i, j);
    }
    ops.push_back(std::move(a));
    labels.push_back("k" + std::to_string(k));
  }
  return channel::KrausSet(std::move(ops), std::move(labels));
}

channel::KrausSet random_unitary_kraus(Engine& eng, std::size_t dim,
                                       std::size_t m) {
  std::vector<ComplexMatrix> us;
  us.reserve(m);
  for (std::size_t k = 0; k < m; ++k) us.push_back(unitary(eng, dim));
  return channel::random_unitary_channel(probability_vector(eng, m), us);
}

channel::KrausSet sqrt_povm_kraus(Engine& eng, std::size_t dim, std::size_t m) {
  // Normalize random PSD pieces into a POVM, then take square roots.
  std::vector<HermitianMatrix> pieces;
  ComplexMatrix total(dim, dim);
  for (std::size_t k = 0; k < m; ++k) {
    pieces.push_back(psd(eng, dim));
    total += pieces.back().matrix();
  }
  const HermitianMatrix t(total);
  const HermitianMatrix t_inv_sqrt =
      linalg::psd_sqrt(linalg::hermitian_inverse(t, 1e-12));
  std::vector<ComplexMatrix> ops;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < m; ++k) {
    const ComplexMatrix e =
        t_inv_sqrt.matrix() * pieces[k].matrix() * t_inv_sqrt.matrix();
    ops.push_back(linalg::psd_sqrt(HermitianMatrix(e)).matrix());
    labels.push_back("e" + std::to_string(k));
  }
  return channel::KrausSet(std::move(ops), std::move(labels));
}

channel::KrausSet nonunital_kraus(Engine& eng, std::size_t dim, std::size_t m,
                                  double min_defect) {
  while (true) {
    channel::KrausSet k = trace_preserving_kraus(eng, dim, m);
    if (channel::is_unital(k).defect >= min_defect) return k;
  }
}

channel::KrausSet measure_and_reprepare(Engine& eng, std::size_t dim) {
  const ComplexMatrix basis = unitary(eng, dim);
  const std::vector<Complex> target = unit_vector(eng, dim);
  std::vector<ComplexMatrix> ops;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < dim; ++k) {
    ops.push_back(linalg::outer(target, basis.column(k)));
    labels.push_back("m" + std::to_string(k));
  }
  return channel::KrausSet(std::move(ops), std::move(labels));
}

ForwardInstance deterministic_feasible_instance(Engine& eng, std::size_t n) {
  while (true) {
    const HermitianMatrix pi = correlation(eng, n);
    const states::PureStateSet finals = independent_state_set(eng, n, n);
    const states::GramMatrix g2 = states::gram_matrix(finals);
    const HermitianMatrix g1(linalg::hadamard(pi.matrix(), g2.matrix()));
    if (linalg::hermitian_eig(g1).eigenvalues.back() < 1e-6) continue;

    const ComplexMatrix c = linalg::factor_psd(g1, n);
    std::vector<std::vector<Complex>> cols;
    for (std::size_t j = 0; j < n; ++j) cols.push_back(c.column(j));
    states::PureStateSet initials(n, std::move(cols));
    return ForwardInstance{
        transform::TransformProblem(std::move(initials), finals,
                                    std::vector<double>(n, 1.0)),
        pi};
  }
}

ForwardInstance probabilistic_feasible_instance(Engine& eng, std::size_t n,
                                                std::size_t d) {
  std::uniform_real_distribution<double> shrink(0.3, 0.95);
  while (true) {
    const states::PureStateSet initials = independent_state_set(eng, d, n);
    const states::PureStateSet finals = state_set(eng, d, n);
    const HermitianMatrix pi0 = psd(eng, n);
    const ComplexMatrix g1 = states::gram_matrix(initials).matrix();
    const ComplexMatrix g2 = states::gram_matrix(finals).matrix();

    double diag_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) diag_max = std::max(diag_max, pi0(j, j).real());
    if (diag_max <= 0.0) continue;

    // Largest t keeping gram1 - t pi0 o gram2 PSD and the diagonal in [0,1].
    double lo = 0.0, hi = 1.0 / diag_max;
    const auto min_eig_at = [&](double t) {
      const HermitianMatrix residual(
          g1 - linalg::hadamard(Complex(t, 0.0) * pi0.matrix(), g2));
      return linalg::hermitian_eig(residual).eigenvalues.back();
    };
    if (min_eig_at(hi) < 0.0) {
      for (int step = 0; step < 60; ++step) {
        const double mid = 0.5 * (lo + hi);
        (min_eig_at(mid) >= 0.0 ? lo : hi) = mid;
      }
    } else {
      lo = hi;
    }
    const double t = lo * shrink(eng);
    if (t * diag_max < 1e-4) continue;

    ComplexMatrix scaled = pi0.matrix();
    scaled *= Complex(t, 0.0);
    const HermitianMatrix pi(scaled);
    return ForwardInstance{
        transform::TransformProblem(initials, finals, pi.real_diagonal()), pi};
  }
}

}  // namespace qop::rng
