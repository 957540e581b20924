#include "qop/states.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qop/error.hpp"

namespace qop::states {

using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

PureStateSet::PureStateSet(std::size_t dim, std::vector<std::vector<Complex>> states,
                           double tol)
    : dim_(dim), states_(std::move(states)) {
  if (dim_ == 0) throw DomainError("state space dimension must be at least 1");
  if (states_.empty()) throw DomainError("state set must contain at least one state");
  const double t = tol < 0.0 ? scaled_tol(dim_, 1.0) : tol;
  for (std::size_t j = 0; j < states_.size(); ++j) {
    if (states_[j].size() != dim_) {
      throw DomainError("state " + std::to_string(j) + " has wrong dimension");
    }
    const double n = linalg::vector_norm(states_[j]);
    if (std::abs(n - 1.0) > t) {
      throw DomainError("state " + std::to_string(j) + " has norm " +
                        std::to_string(n) + ", expected 1");
    }
  }
}

GramMatrix::GramMatrix(const HermitianMatrix& m, double psd_tol) : m_(m) {
  const double diag_tol = scaled_tol(m.dim(), std::max(m.max_abs(), 1.0));
  for (std::size_t j = 0; j < m.dim(); ++j) {
    if (std::abs(m(j, j).real() - 1.0) > diag_tol) {
      throw DomainError("Gram diagonal entry " + std::to_string(j) +
                        " deviates from 1");
    }
  }
  const linalg::PsdReport psd = linalg::psd_check(m, psd_tol);
  if (!psd.positive) {
    throw DomainError("Gram matrix is not PSD (min eigenvalue " +
                      std::to_string(psd.min_eigenvalue) + ")");
  }
}

Ensemble::Ensemble(PureStateSet states, std::vector<double> priors, double tol)
    : states_(std::move(states)), priors_(std::move(priors)) {
  if (priors_.size() != states_.size()) {
    throw DomainError("one prior per state required");
  }
  const double t = tol < 0.0 ? scaled_tol(priors_.size(), 1.0) : tol;
  double total = 0.0;
  for (double q : priors_) {
    if (q < 0.0) throw DomainError("priors must be nonnegative");
    total += q;
  }
  if (std::abs(total - 1.0) > t) {
    throw DomainError("priors sum to " + std::to_string(total) + ", expected 1");
  }
}

GramMatrix gram_matrix(const PureStateSet& s) {
  const std::size_t n = s.size();
  ComplexMatrix g(n, n);
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      g(j1, j2) = linalg::inner(s.state(j1), s.state(j2));
    }
  }
  return GramMatrix(HermitianMatrix(g));
}

bool linearly_independent(const PureStateSet& s, double tol) {
  if (s.size() > s.dim()) return false;
  const GramMatrix g = gram_matrix(s);
  const linalg::EigenDecomposition eig = linalg::hermitian_eig(g.hermitian());
  return eig.eigenvalues.back() > tol;
}

std::vector<std::vector<Complex>> reciprocal_vectors(const PureStateSet& s,
                                                     double tol) {
  if (!linearly_independent(s, tol)) {
    throw DomainError("reciprocal vectors require a linearly independent state set");
  }
  const GramMatrix g = gram_matrix(s);
  const HermitianMatrix g_inv = linalg::hermitian_inverse(g.hermitian());

  // dual_j = sum_j' (G^{-1})_{j'j} psi_j', which lands in span(s) and gives
  // <dual_j | psi_j> = 1.
  const std::size_t n = s.size();
  std::vector<std::vector<Complex>> duals(n, std::vector<Complex>(s.dim(), 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t jp = 0; jp < n; ++jp) {
      const Complex w = g_inv(jp, j);
      for (std::size_t d = 0; d < s.dim(); ++d) {
        duals[j][d] += w * s.state(jp)[d];
      }
    }
  }
  return duals;
}

channel::DensityOperator ensemble_density(const Ensemble& e) {
  const std::size_t d = e.states().dim();
  ComplexMatrix rho(d, d);
  for (std::size_t j = 0; j < e.size(); ++j) {
    const double q = e.priors()[j];
    if (q == 0.0) continue;
    const std::vector<Complex>& psi = e.states().state(j);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        rho(a, b) += q * psi[a] * std::conj(psi[b]);
      }
    }
  }
  return channel::DensityOperator(linalg::hermitian_unchecked(std::move(rho)));
}

HermitianMatrix weighted_gram(const Ensemble& e) {
  const GramMatrix g = gram_matrix(e.states());
  const std::size_t n = e.size();
  ComplexMatrix q(n, n);
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      q(j1, j2) = std::sqrt(e.priors()[j1] * e.priors()[j2]);
    }
  }
  return HermitianMatrix(linalg::hadamard(q, g.matrix()));
}

std::vector<Complex> tensor_product(const std::vector<Complex>& a,
                                    const std::vector<Complex>& b) {
  std::vector<Complex> out;
  out.reserve(a.size() * b.size());
  for (const Complex& x : a) {
    for (const Complex& y : b) out.push_back(x * y);
  }
  return out;
}

}  // namespace qop::states
