#pragma once

#include <cstddef>
#include <vector>

#include "qop/channel.hpp"
#include "qop/linalg.hpp"
#include "qop/tolerances.hpp"

namespace qop::states {

using linalg::Complex;

// An ordered list of N unit vectors in a D-dimensional complex space.
class PureStateSet {
 public:
  PureStateSet(std::size_t dim, std::vector<std::vector<Complex>> states,
               double tol = -1.0);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<Complex>& state(std::size_t j) const { return states_[j]; }
  const std::vector<std::vector<Complex>>& states() const { return states_; }

 private:
  std::size_t dim_;
  std::vector<std::vector<Complex>> states_;
};

// N x N matrix of pairwise inner products <psi_j' | psi_j>; positive
// semidefinite with unit diagonal.
class GramMatrix {
 public:
  explicit GramMatrix(const linalg::HermitianMatrix& m, double psd_tol = kPsdTol);

  std::size_t size() const { return m_.dim(); }
  const linalg::HermitianMatrix& hermitian() const { return m_; }
  const linalg::ComplexMatrix& matrix() const { return m_.matrix(); }
  const Complex& operator()(std::size_t j1, std::size_t j2) const { return m_(j1, j2); }

 private:
  linalg::HermitianMatrix m_;
};

// Pure states with a prior probability per state. Zero priors are allowed;
// the state keeps its slot so indices line up across ensembles.
class Ensemble {
 public:
  Ensemble(PureStateSet states, std::vector<double> priors, double tol = -1.0);

  const PureStateSet& states() const { return states_; }
  const std::vector<double>& priors() const { return priors_; }
  std::size_t size() const { return priors_.size(); }

 private:
  PureStateSet states_;
  std::vector<double> priors_;
};

GramMatrix gram_matrix(const PureStateSet& s);

// Gram criterion: smallest Gram eigenvalue above tol.
bool linearly_independent(const PureStateSet& s, double tol = kPsdTol);

// Dual vectors: each lies in span(s), is orthogonal to every other member
// of s, and has a real positive overlap with its own state. Computed
// through the Gram inverse, which pins <dual_j | psi_j> = 1; lengths are
// not normalized.
std::vector<std::vector<Complex>> reciprocal_vectors(const PureStateSet& s,
                                                     double tol = kPsdTol);

// rho(q) = sum_j q_j |psi_j><psi_j|
channel::DensityOperator ensemble_density(const Ensemble& e);

// Q o Gram with Q_{j'j} = sqrt(q_j' q_j); shares its nonzero spectrum with
// the ensemble density operator.
linalg::HermitianMatrix weighted_gram(const Ensemble& e);

// Elementwise tensor product of two state vectors.
std::vector<Complex> tensor_product(const std::vector<Complex>& a,
                                    const std::vector<Complex>& b);

}  // namespace qop::states
