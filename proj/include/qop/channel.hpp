#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qop/linalg.hpp"
#include "qop/tolerances.hpp"

namespace qop::channel {

// D x D Hermitian, positive semidefinite, unit-trace matrix.
class DensityOperator {
 public:
  explicit DensityOperator(const linalg::HermitianMatrix& m, double tol = kPsdTol);

  static DensityOperator maximally_mixed(std::size_t dim);
  static DensityOperator pure(const std::vector<linalg::Complex>& state);

  std::size_t dim() const { return m_.dim(); }
  const linalg::HermitianMatrix& hermitian() const { return m_; }
  const linalg::ComplexMatrix& matrix() const { return m_.matrix(); }

  // Eigenvalues in descending order.
  std::vector<double> spectrum() const;

 private:
  linalg::HermitianMatrix m_;
};

// A finite collection of equally shaped operators, each tagged with the
// outcome it belongs to. Completeness is a measured property, not an
// assumption.
class KrausSet {
 public:
  KrausSet(std::vector<linalg::ComplexMatrix> operators,
           std::vector<std::string> labels);

  // Convenience: every operator gets the same outcome label.
  KrausSet(std::vector<linalg::ComplexMatrix> operators, const std::string& label);

  std::size_t size() const { return operators_.size(); }
  std::size_t in_dim() const { return operators_.front().cols(); }
  std::size_t out_dim() const { return operators_.front().rows(); }

  const linalg::ComplexMatrix& op(std::size_t k) const { return operators_[k]; }
  const std::string& label(std::size_t k) const { return labels_[k]; }
  const std::vector<linalg::ComplexMatrix>& operators() const { return operators_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Distinct labels in first-appearance order.
  std::vector<std::string> outcome_labels() const;

  // || sum_k A_k^dagger A_k - 1 ||_F
  double completeness_defect() const;

 private:
  std::vector<linalg::ComplexMatrix> operators_;
  std::vector<std::string> labels_;
};

struct DefectVerdict {
  bool pass = false;
  double defect = 0.0;
};

struct UnitalVerdict {
  bool applicable = false;  // defined only for square channels
  bool pass = false;
  double defect = 0.0;              // || sum_k A_k A_k^dagger - 1 ||_F
  double fixed_point_defect = 0.0;  // || channel(1/D) - 1/D ||_F
};

// Real nonnegative matrix mapping input-state eigenvalues to output-state
// eigenvalues. Sums over the output index equal 1 for trace-preserving
// channels; sums over the input index equal 1 exactly for unital ones.
class TransferMatrix {
 public:
  TransferMatrix(std::size_t out_dim, std::size_t in_dim);

  std::size_t out_dim() const { return out_dim_; }
  std::size_t in_dim() const { return in_dim_; }

  double& operator()(std::size_t r_out, std::size_t r_in) {
    return entries_[r_out * in_dim_ + r_in];
  }
  double operator()(std::size_t r_out, std::size_t r_in) const {
    return entries_[r_out * in_dim_ + r_in];
  }

  std::vector<double> apply(const std::vector<double>& v) const;

  // One sum per input eigenvector, taken over outputs; 1 iff trace-preserving.
  std::vector<double> per_input_sums() const;
  // One sum per output eigenvector, taken over inputs; 1 iff unital.
  std::vector<double> per_output_sums() const;

  // max | lambda_out - S lambda_in | recorded at construction time.
  double reconstruction_residual = 0.0;

 private:
  std::size_t out_dim_;
  std::size_t in_dim_;
  std::vector<double> entries_;
};

linalg::HermitianMatrix povm_element(const KrausSet& k, const std::string& outcome);

double outcome_probability(const KrausSet& k, const std::string& outcome,
                           const DensityOperator& rho);

DensityOperator post_measurement_state(const KrausSet& k, const std::string& outcome,
                                       const DensityOperator& rho);

// Nonselective application; requires trace preservation within tol.
DensityOperator apply_channel(const KrausSet& k, const DensityOperator& rho,
                              double tol = kPsdTol);

DefectVerdict is_trace_preserving(const KrausSet& k, double tol = kPsdTol);

UnitalVerdict is_unital(const KrausSet& k, double tol = kPsdTol);

// S with entries sum_k |<out_r' | A_k | in_r>|^2 over the eigenbases of
// rho1 and rho2. rho2 should be the channel output for rho1.
TransferMatrix transfer_matrix(const KrausSet& k, const DensityOperator& rho1,
                               const DensityOperator& rho2);

// A_k = sqrt(p_k) U_k from a probability distribution and unitaries.
KrausSet random_unitary_channel(const std::vector<double>& weights,
                                const std::vector<linalg::ComplexMatrix>& unitaries,
                                double tol = kPsdTol);

}  // namespace qop::channel
