#include "qop/majorize.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qop/error.hpp"

namespace qop::majorize {

using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

SpectrumVector::SpectrumVector(std::vector<double> values, double tol)
    : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("spectrum must be nonempty");
  for (double& v : values_) {
    if (v < -tol) {
      throw DomainError("spectrum entry " + std::to_string(v) +
                        " is below zero beyond tolerance");
    }
    if (v < 0.0) v = 0.0;
  }
}

std::vector<double> SpectrumVector::descending() const {
  std::vector<double> out = values_;
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

double SpectrumVector::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

MajorizationVerdict majorizes(const std::vector<double>& lambda,
                              const std::vector<double>& sigma, double tol) {
  const std::size_t n = std::max(lambda.size(), sigma.size());
  std::vector<double> lam(lambda), sig(sigma);
  lam.resize(n, 0.0);
  sig.resize(n, 0.0);
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  std::sort(sig.begin(), sig.end(), std::greater<double>());

  MajorizationVerdict v;
  double lam_prefix = 0.0;
  double sig_prefix = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    lam_prefix += lam[k];
    sig_prefix += sig[k];
    if (k + 1 < n && sig_prefix > lam_prefix + tol && !v.violated_prefix) {
      v.violated_prefix = k + 1;
    }
  }
  v.total_gap = std::abs(sig_prefix - lam_prefix);
  v.totals_match = v.total_gap <= tol;
  v.holds = v.totals_match && !v.violated_prefix;
  return v;
}

MajorizationVerdict majorizes(const SpectrumVector& lambda,
                              const SpectrumVector& sigma, double tol) {
  return majorizes(lambda.values(), sigma.values(), tol);
}

DoublyStochasticMatrix::DoublyStochasticMatrix(std::size_t n,
                                               std::vector<double> entries,
                                               double tol)
    : n_(n), entries_(std::move(entries)) {
  if (n_ == 0 || entries_.size() != n_ * n_) {
    throw DomainError("doubly stochastic matrix must be square and nonempty");
  }
  for (double& e : entries_) {
    if (e < -tol) throw DomainError("doubly stochastic entries must be nonnegative");
    if (e < 0.0) e = 0.0;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      row += entries_[i * n_ + j];
      col += entries_[j * n_ + i];
    }
    if (std::abs(row - 1.0) > tol || std::abs(col - 1.0) > tol) {
      throw DomainError("row/column " + std::to_string(i) + " does not sum to 1");
    }
  }
}

std::vector<double> DoublyStochasticMatrix::apply(const std::vector<double>& v) const {
  if (v.size() != n_) throw DomainError("doubly stochastic matrix shape mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) out[i] += entries_[i * n_ + j] * v[j];
  }
  return out;
}

DoublyStochasticMatrix ds_witness(const std::vector<double>& lambda,
                                  const std::vector<double>& sigma, double tol) {
  const MajorizationVerdict v = majorizes(lambda, sigma, tol);
  if (!v.holds) {
    throw DomainError(
        "witness requires the majorization to hold" +
        (v.violated_prefix
             ? " (prefix " + std::to_string(*v.violated_prefix) + " violated)"
             : std::string(" (totals differ by ") + std::to_string(v.total_gap) +
                   ")"));
  }

  const std::size_t n = std::max(lambda.size(), sigma.size());
  std::vector<double> x(lambda), target(sigma);
  x.resize(n, 0.0);
  target.resize(n, 0.0);
  std::sort(x.begin(), x.end(), std::greater<double>());
  std::sort(target.begin(), target.end(), std::greater<double>());

  // Compose at most n-1 T-transforms. Each step picks the last coordinate
  // still above its target and the first one below it after that, then
  // mixes the pair just enough to pin one of them.
  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) s[i * n + i] = 1.0;

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t j = n;
    for (std::size_t i = n; i-- > 0;) {
      if (x[i] > target[i] + tol) {
        j = i;
        break;
      }
    }
    if (j == n) break;  // every coordinate already matches
    std::size_t k = n;
    for (std::size_t i = j + 1; i < n; ++i) {
      if (x[i] < target[i] - tol) {
        k = i;
        break;
      }
    }
    if (k == n) break;

    const double delta = std::min(x[j] - target[j], target[k] - x[k]);
    const double t = delta / (x[j] - x[k]);

    // T = (1-t) I + t P_{jk}, applied on the left of the accumulated S.
    for (std::size_t c = 0; c < n; ++c) {
      const double row_j = s[j * n + c];
      const double row_k = s[k * n + c];
      s[j * n + c] = (1.0 - t) * row_j + t * row_k;
      s[k * n + c] = t * row_j + (1.0 - t) * row_k;
    }
    const double xj = x[j];
    x[j] = (1.0 - t) * xj + t * x[k];
    x[k] = t * xj + (1.0 - t) * x[k];
  }

  return DoublyStochasticMatrix(n, std::move(s), tol * static_cast<double>(n));
}

bool uniform_fixed_point(const std::vector<double>& sigma, std::size_t n,
                         double tol) {
  if (n == 0) throw DomainError("uniform distribution needs at least one slot");
  const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
  if (!majorizes(uniform, sigma, tol).holds) return true;  // vacuous
  std::vector<double> sig(sigma);
  sig.resize(std::max(sigma.size(), n), 0.0);
  std::sort(sig.begin(), sig.end(), std::greater<double>());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const double expected = i < n ? 1.0 / static_cast<double>(n) : 0.0;
    if (std::abs(sig[i] - expected) > tol) return false;
  }
  return true;
}

BapatSunderResult bapat_sunder_check(const HermitianMatrix& a,
                                     const HermitianMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw DomainError("matrices must share one size");
  const linalg::PsdReport pos = linalg::psd_check(a, tol);
  if (!pos.positive) {
    throw DomainError("first factor must be PSD (min eigenvalue " +
                      std::to_string(pos.min_eigenvalue) + ")");
  }
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (std::abs(a(j, j).real() - 1.0) > tol) {
      throw DomainError("first factor must have a unit diagonal");
    }
  }

  const HermitianMatrix product(linalg::hadamard(a.matrix(), b.matrix()));
  BapatSunderResult result;
  result.product_spectrum = linalg::hermitian_eig(product).eigenvalues;
  result.b_spectrum = linalg::hermitian_eig(b).eigenvalues;
  result.verdict = majorizes(result.b_spectrum, result.product_spectrum, tol);
  return result;
}

namespace {

std::vector<double> padded_descending(std::vector<double> v, std::size_t n) {
  v.resize(std::max(v.size(), n), 0.0);
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

double spectrum_gap(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  const std::vector<double> x = padded_descending(a, n);
  const std::vector<double> y = padded_descending(b, n);
  double gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) gap = std::max(gap, std::abs(x[i] - y[i]));
  return gap;
}

}  // namespace

DeterministicMixingReport theorem3_check(const transform::TransformProblem& prob,
                                         const std::vector<double>& q, double tol) {
  DeterministicMixingReport report;
  report.deterministic_certificate = transform::deterministic_pi(prob);
  report.hypothesis_met = report.deterministic_certificate->feasible;
  if (!report.hypothesis_met) return report;

  const states::Ensemble initial(prob.initial_states(), q);
  const states::Ensemble final_ensemble(prob.final_states(), q);
  const channel::DensityOperator rho1 = states::ensemble_density(initial);
  const channel::DensityOperator rho2 = states::ensemble_density(final_ensemble);

  const std::size_t slots = std::max(prob.size(), prob.initial_states().dim());
  report.initial_spectrum = padded_descending(rho1.spectrum(), slots);
  report.final_spectrum = padded_descending(
      rho2.spectrum(), std::max(prob.size(), prob.final_states().dim()));
  report.majorization =
      majorizes(report.final_spectrum, report.initial_spectrum, tol);

  // Gram-side identity: Q o gram1 equals pi o (Q o gram2) entrywise.
  const HermitianMatrix wg1 = states::weighted_gram(initial);
  const HermitianMatrix wg2 = states::weighted_gram(final_ensemble);
  const ComplexMatrix lhs = wg1.matrix();
  const ComplexMatrix rhs = linalg::hadamard(
      report.deterministic_certificate->pi.matrix(), wg2.matrix());
  report.gram_identity_residual = (lhs - rhs).frobenius_norm();

  // Each ensemble density shares its nonzero spectrum with the weighted Gram.
  report.initial_spectrum_gap =
      spectrum_gap(rho1.spectrum(), linalg::hermitian_eig(wg1).eigenvalues);
  report.final_spectrum_gap =
      spectrum_gap(rho2.spectrum(), linalg::hermitian_eig(wg2).eigenvalues);

  const double recon_tol = std::max(
      tol, scaled_tol(slots, 1.0));
  report.holds = report.majorization.holds &&
                 report.gram_identity_residual <= recon_tol &&
                 report.initial_spectrum_gap <= recon_tol &&
                 report.final_spectrum_gap <= recon_tol;
  return report;
}

double monotones(const states::Ensemble& e, std::size_t k) {
  const std::size_t slots = std::max(e.size(), e.states().dim());
  if (k < 1 || k > slots) {
    throw DomainError("partial-sum index must lie in [1, " +
                      std::to_string(slots) + "]");
  }
  const std::vector<double> spectrum =
      padded_descending(states::ensemble_density(e).spectrum(), slots);
  double mu = 0.0;
  for (std::size_t r = 0; r < k; ++r) mu += spectrum[r];
  return mu;
}

double von_neumann_entropy(const channel::DensityOperator& rho) {
  double bits = 0.0;
  for (double lambda : rho.spectrum()) {
    if (lambda > 0.0) bits -= lambda * std::log2(lambda);
  }
  return std::max(bits, 0.0);
}

}  // namespace qop::majorize
