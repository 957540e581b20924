#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qop/channel.hpp"
#include "qop/linalg.hpp"
#include "qop/states.hpp"
#include "qop/tolerances.hpp"
#include "qop/transform.hpp"

namespace qop::majorize {

// Real vector of probabilities or density-operator eigenvalues. Entries
// may dip below zero only by numerical noise; reads clip them to zero.
class SpectrumVector {
 public:
  explicit SpectrumVector(std::vector<double> values, double tol = kZeroTol);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double> descending() const;
  double sum() const;

 private:
  std::vector<double> values_;
};

struct MajorizationVerdict {
  bool holds = false;
  bool totals_match = false;
  double total_gap = 0.0;  // |sum sigma - sum lambda|
  // First k whose prefix sum of sigma exceeds that of lambda (1-based),
  // when the prefix inequalities fail.
  std::optional<std::size_t> violated_prefix;
};

// sigma majorized-by lambda: every prefix sum of the descending sort of
// sigma is bounded by the matching prefix of lambda, with equal totals.
// Unequal lengths are zero-padded. Works on raw (possibly negative)
// eigenvalue vectors.
MajorizationVerdict majorizes(const std::vector<double>& lambda,
                              const std::vector<double>& sigma, double tol = 1e-9);

MajorizationVerdict majorizes(const SpectrumVector& lambda,
                              const SpectrumVector& sigma, double tol = 1e-9);

// Nonnegative square matrix whose rows and columns each sum to one.
class DoublyStochasticMatrix {
 public:
  DoublyStochasticMatrix(std::size_t n, std::vector<double> entries,
                         double tol = 1e-9);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::vector<double> apply(const std::vector<double>& v) const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

// Explicit witness for a majorization: a doubly stochastic S with
// S lambda_desc = sigma_desc, built from at most N-1 T-transforms.
DoublyStochasticMatrix ds_witness(const std::vector<double>& lambda,
                                  const std::vector<double>& sigma,
                                  double tol = 1e-9);

// If sigma is majorized by the uniform distribution on n slots, sigma must
// be that uniform distribution. Vacuously true when the majorization
// does not hold.
bool uniform_fixed_point(const std::vector<double>& sigma, std::size_t n,
                         double tol = 1e-9);

struct BapatSunderResult {
  MajorizationVerdict verdict;
  std::vector<double> product_spectrum;  // eigenvalues of a o b, descending
  std::vector<double> b_spectrum;        // eigenvalues of b, descending
};

// For a PSD with unit diagonal and b Hermitian: lambda(a o b) is majorized
// by lambda(b).
BapatSunderResult bapat_sunder_check(const linalg::HermitianMatrix& a,
                                     const linalg::HermitianMatrix& b,
                                     double tol = 1e-9);

struct DeterministicMixingReport {
  bool hypothesis_met = false;  // unit probabilities and feasible closed form
  std::optional<transform::Certificate> deterministic_certificate;
  // lambda(rho_initial(q)) majorized by lambda(rho_final(q)).
  MajorizationVerdict majorization;
  std::vector<double> initial_spectrum;  // zero-padded, descending
  std::vector<double> final_spectrum;
  // || Q o gram1 - pi o (Q o gram2) ||_F
  double gram_identity_residual = 0.0;
  // Spectrum gap between each ensemble density and its weighted Gram.
  double initial_spectrum_gap = 0.0;
  double final_spectrum_gap = 0.0;
  bool holds = false;
};

// Full mixing-monotonicity pipeline for a deterministic transformation and
// a prior vector q.
DeterministicMixingReport theorem3_check(const transform::TransformProblem& prob,
                                         const std::vector<double>& q,
                                         double tol = 1e-9);

// Partial sum of the k largest ensemble-density eigenvalues; the spectrum
// is zero-padded to max(N, D) slots.
double monotones(const states::Ensemble& e, std::size_t k);

// -sum lambda log2 lambda, in bits.
double von_neumann_entropy(const channel::DensityOperator& rho);

}  // namespace qop::majorize
