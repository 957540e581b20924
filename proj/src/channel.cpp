#include "qop/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qop/error.hpp"

namespace qop::channel {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

DensityOperator::DensityOperator(const HermitianMatrix& m, double tol) : m_(m) {
  const linalg::PsdReport psd = linalg::psd_check(m, tol);
  if (!psd.positive) {
    throw DomainError("density operator is not PSD (min eigenvalue " +
                      std::to_string(psd.min_eigenvalue) + ")");
  }
  const double trace_gap = std::abs(m.trace().real() - 1.0);
  if (trace_gap > tol) {
    throw DomainError("density operator trace deviates from 1 by " +
                      std::to_string(trace_gap));
  }
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / static_cast<double>(dim);
  return DensityOperator(linalg::hermitian_unchecked(std::move(m)));
}

DensityOperator DensityOperator::pure(const std::vector<Complex>& state) {
  const double n = linalg::vector_norm(state);
  if (n == 0.0) throw DomainError("pure state must be nonzero");
  std::vector<Complex> unit = state;
  for (Complex& z : unit) z /= n;
  return DensityOperator(linalg::hermitian_unchecked(linalg::outer(unit, unit)));
}

std::vector<double> DensityOperator::spectrum() const {
  return linalg::hermitian_eig(m_).eigenvalues;
}

namespace {

void validate_kraus(const std::vector<ComplexMatrix>& operators,
                    const std::vector<std::string>& labels) {
  if (operators.empty()) throw DomainError("Kraus set must be nonempty");
  if (labels.size() != operators.size()) {
    throw DomainError("one outcome label per operator required");
  }
  const std::size_t r = operators.front().rows();
  const std::size_t c = operators.front().cols();
  for (const ComplexMatrix& a : operators) {
    if (a.rows() != r || a.cols() != c) {
      throw DomainError("all Kraus operators must share one shape");
    }
  }
}

}  // namespace

KrausSet::KrausSet(std::vector<ComplexMatrix> operators,
                   std::vector<std::string> labels)
    : operators_(std::move(operators)), labels_(std::move(labels)) {
  validate_kraus(operators_, labels_);
}

KrausSet::KrausSet(std::vector<ComplexMatrix> operators, const std::string& label)
    : operators_(std::move(operators)), labels_(operators_.size(), label) {
  validate_kraus(operators_, labels_);
}

std::vector<std::string> KrausSet::outcome_labels() const {
  std::vector<std::string> out;
  for (const std::string& l : labels_) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  return out;
}

double KrausSet::completeness_defect() const {
  ComplexMatrix sum(in_dim(), in_dim());
  for (const ComplexMatrix& a : operators_) sum += a.adjoint() * a;
  sum -= ComplexMatrix::identity(in_dim());
  return sum.frobenius_norm();
}

TransferMatrix::TransferMatrix(std::size_t out_dim, std::size_t in_dim)
    : out_dim_(out_dim), in_dim_(in_dim), entries_(out_dim * in_dim, 0.0) {}

std::vector<double> TransferMatrix::apply(const std::vector<double>& v) const {
  if (v.size() != in_dim_) throw DomainError("transfer matrix shape mismatch");
  std::vector<double> out(out_dim_, 0.0);
  for (std::size_t i = 0; i < out_dim_; ++i) {
    for (std::size_t j = 0; j < in_dim_; ++j) out[i] += (*this)(i, j) * v[j];
  }
  return out;
}

std::vector<double> TransferMatrix::per_input_sums() const {
  std::vector<double> sums(in_dim_, 0.0);
  for (std::size_t j = 0; j < in_dim_; ++j) {
    for (std::size_t i = 0; i < out_dim_; ++i) sums[j] += (*this)(i, j);
  }
  return sums;
}

std::vector<double> TransferMatrix::per_output_sums() const {
  std::vector<double> sums(out_dim_, 0.0);
  for (std::size_t i = 0; i < out_dim_; ++i) {
    for (std::size_t j = 0; j < in_dim_; ++j) sums[i] += (*this)(i, j);
  }
  return sums;
}

HermitianMatrix povm_element(const KrausSet& k, const std::string& outcome) {
  ComplexMatrix sum(k.in_dim(), k.in_dim());
  bool found = false;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k.label(i) != outcome) continue;
    sum += k.op(i).adjoint() * k.op(i);
    found = true;
  }
  if (!found) throw DomainError("unknown outcome label '" + outcome + "'");
  return linalg::hermitian_unchecked(std::move(sum));
}

double outcome_probability(const KrausSet& k, const std::string& outcome,
                           const DensityOperator& rho) {
  if (rho.dim() != k.in_dim()) {
    throw DomainError("density operator dimension does not match the channel");
  }
  const HermitianMatrix e = povm_element(k, outcome);
  Complex t = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) t += rho.matrix()(i, j) * e(j, i);
  }
  return t.real();
}

namespace {

ComplexMatrix conjugate_by(const ComplexMatrix& a, const ComplexMatrix& rho) {
  return a * rho * a.adjoint();
}

}  // namespace

DensityOperator post_measurement_state(const KrausSet& k, const std::string& outcome,
                                       const DensityOperator& rho) {
  const double p = outcome_probability(k, outcome, rho);
  if (p <= kZeroTol) {
    throw DomainError("conditioning on outcome '" + outcome +
                      "' with probability " + std::to_string(p));
  }
  ComplexMatrix sum(k.out_dim(), k.out_dim());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k.label(i) != outcome) continue;
    sum += conjugate_by(k.op(i), rho.matrix());
  }
  sum *= Complex(1.0 / p, 0.0);
  return DensityOperator(linalg::hermitian_unchecked(std::move(sum)));
}

DensityOperator apply_channel(const KrausSet& k, const DensityOperator& rho,
                              double tol) {
  const DefectVerdict tp = is_trace_preserving(k, tol);
  if (!tp.pass) {
    throw DomainError("channel is not trace-preserving (defect " +
                      std::to_string(tp.defect) + ")");
  }
  if (rho.dim() != k.in_dim()) {
    throw DomainError("density operator dimension does not match the channel");
  }
  ComplexMatrix sum(k.out_dim(), k.out_dim());
  for (std::size_t i = 0; i < k.size(); ++i) {
    sum += conjugate_by(k.op(i), rho.matrix());
  }
  return DensityOperator(linalg::hermitian_unchecked(std::move(sum)), tol);
}

DefectVerdict is_trace_preserving(const KrausSet& k, double tol) {
  const double defect = k.completeness_defect();
  return DefectVerdict{defect <= tol, defect};
}

UnitalVerdict is_unital(const KrausSet& k, double tol) {
  UnitalVerdict v;
  v.applicable = k.in_dim() == k.out_dim();
  if (!v.applicable) return v;

  const std::size_t d = k.out_dim();
  ComplexMatrix sum(d, d);
  for (const ComplexMatrix& a : k.operators()) sum += a * a.adjoint();
  v.defect = (sum - ComplexMatrix::identity(d)).frobenius_norm();
  v.pass = v.defect <= tol;

  // Operational form of the same statement: the maximally mixed state must
  // be a fixed point.
  ComplexMatrix mixed_out(d, d);
  const double inv_d = 1.0 / static_cast<double>(d);
  for (const ComplexMatrix& a : k.operators()) {
    mixed_out += Complex(inv_d, 0.0) * (a * a.adjoint());
  }
  ComplexMatrix target(d, d);
  for (std::size_t i = 0; i < d; ++i) target(i, i) = inv_d;
  v.fixed_point_defect = (mixed_out - target).frobenius_norm();
  return v;
}

TransferMatrix transfer_matrix(const KrausSet& k, const DensityOperator& rho1,
                               const DensityOperator& rho2) {
  if (rho1.dim() != k.in_dim() || rho2.dim() != k.out_dim()) {
    throw DomainError("transfer matrix requires matching dimensions");
  }
  const linalg::EigenDecomposition in = linalg::hermitian_eig(rho1.hermitian());
  const linalg::EigenDecomposition out = linalg::hermitian_eig(rho2.hermitian());

  TransferMatrix s(rho2.dim(), rho1.dim());
  for (std::size_t r_in = 0; r_in < rho1.dim(); ++r_in) {
    const std::vector<Complex> phi_in = in.eigenvectors.column(r_in);
    for (const ComplexMatrix& a : k.operators()) {
      const std::vector<Complex> image = a.apply(phi_in);
      for (std::size_t r_out = 0; r_out < rho2.dim(); ++r_out) {
        const Complex amp = linalg::inner(out.eigenvectors.column(r_out), image);
        s(r_out, r_in) += std::norm(amp);
      }
    }
  }

  const std::vector<double> mapped = s.apply(in.eigenvalues);
  double residual = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    residual = std::max(residual, std::abs(mapped[i] - out.eigenvalues[i]));
  }
  s.reconstruction_residual = residual;
  return s;
}

KrausSet random_unitary_channel(const std::vector<double>& weights,
                                const std::vector<ComplexMatrix>& unitaries,
                                double tol) {
  if (weights.empty() || weights.size() != unitaries.size()) {
    throw DomainError("one weight per unitary required");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DomainError("weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("weights must sum to 1, got " + std::to_string(total));
  }
  const std::size_t d = unitaries.front().rows();
  std::vector<ComplexMatrix> ops;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const ComplexMatrix& u = unitaries[i];
    if (u.rows() != d || u.cols() != d) {
      throw DomainError("unitaries must be square and share one dimension");
    }
    const double defect =
        (u.adjoint() * u - ComplexMatrix::identity(d)).frobenius_norm();
    if (defect > tol) {
      throw DomainError("operator " + std::to_string(i) +
                        " is not unitary (defect " + std::to_string(defect) + ")");
    }
    ops.push_back(Complex(std::sqrt(weights[i]), 0.0) * u);
    labels.push_back("u" + std::to_string(i));
  }
  return KrausSet(std::move(ops), std::move(labels));
}

}  // namespace qop::channel
