#pragma once

#include <array>
#include <utility>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qop/channel.hpp"
#include "qop/linalg.hpp"
#include "qop/states.hpp"
#include "qop/tolerances.hpp"

namespace qop::transform {

using PiMatrix = linalg::HermitianMatrix;

// A requested map from each initial state to its target state, with a
// per-state success probability.
class TransformProblem {
 public:
  TransformProblem(states::PureStateSet initial, states::PureStateSet target,
                   std::vector<double> probabilities);

  const states::PureStateSet& initial_states() const { return initial_; }
  const states::PureStateSet& final_states() const { return final_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  std::size_t size() const { return probabilities_.size(); }

  bool deterministic(double tol = kPsdTol) const;

 private:
  states::PureStateSet initial_;
  states::PureStateSet final_;
  std::vector<double> probabilities_;
};

struct ConditionVerdict {
  bool pass = false;
  // Min eigenvalue for the two positivity conditions, max diagonal
  // deviation for the diagonal condition.
  double witness = 0.0;
};

// The three feasibility conditions evaluated for a candidate certificate:
// the candidate must be PSD, its diagonal must match the probability
// vector, and the overlap residual gram1 - pi o gram2 must be PSD.
struct Certificate {
  explicit Certificate(PiMatrix candidate) : pi(std::move(candidate)) {}

  PiMatrix pi;
  ConditionVerdict pi_positive;         // candidate >= 0
  ConditionVerdict diagonal_matches;    // Diag(candidate) = p
  ConditionVerdict residual_positive;   // gram1 - candidate o gram2 >= 0
  bool feasible = false;
  // The conditions are sufficient only for linearly independent initial
  // states; otherwise they are necessary-only and this is false.
  bool sufficiency_applies = false;
  double tol = kPsdTol;
  // Set by deterministic_pi when a zero final overlap forces a nonzero
  // initial overlap to vanish (index pair of the conflicting entry).
  std::optional<std::array<std::size_t, 2>> zero_overlap_conflict;
};

Certificate verify_pi(const TransformProblem& prob, const PiMatrix& pi,
                      double tol = kPsdTol);

// Builds the two-outcome realization of a verified certificate: success
// operators from a rank-minimal factorization of pi plus the failure
// operator sqrt(1 - E_success), so the returned set is trace-preserving.
channel::KrausSet kraus_from_pi(const TransformProblem& prob, const PiMatrix& pi,
                                double tol = kPsdTol);

// Low-level builder for the success operators
//   A_k = sum_j c_kj / <dual_j|psi_j> |target_j><dual_j|,
// exposed so the scale invariance in the dual vectors can be exercised
// directly.
std::vector<linalg::ComplexMatrix> success_operators(
    const states::PureStateSet& targets,
    const std::vector<std::vector<linalg::Complex>>& duals,
    const states::PureStateSet& initial, const linalg::ComplexMatrix& coeffs);

// Closed form for unit probabilities: pi = gram1 o gram2^{o-1}. Entries
// where both overlaps vanish are unconstrained and set to zero; a zero
// final overlap against a nonzero initial overlap is an immediate
// infeasibility with an index witness.
Certificate deterministic_pi(const TransformProblem& prob, double tol = kPsdTol);

// Feasibility of gram1 - diag(p) >= 0 for transforming to an orthonormal
// set, certified by the rank-one candidate sqrt(p_j' p_j).
Certificate usd_feasible(const states::PureStateSet& initial,
                         const std::vector<double>& p, double tol = kPsdTol);

// Largest uniform success probability: the smallest Gram eigenvalue,
// clamped to [0, 1].
double usd_max_uniform(const states::PureStateSet& initial);

struct RankOneResult {
  Certificate certificate;
  std::optional<channel::KrausSet> kraus;  // set iff feasible and constructible
};

// Two-operator realization with a single success operator. Moduli of the
// coefficients are fixed by sqrt(p_j); the caller chooses the phases, and
// an empty vector means all-zero phases.
RankOneResult rank_one_two_outcome(const TransformProblem& prob,
                                   const std::vector<double>& phases = {},
                                   double tol = kPsdTol);

struct PhaseSearchOptions {
  std::size_t attempts = 200;  // random draws after the all-zero try
  std::uint64_t seed = 1;
};

// Random search over coefficient phases (first phase pinned to zero);
// returns the first phase vector whose rank-one candidate verifies.
std::optional<std::vector<double>> rank_one_phase_search(
    const TransformProblem& prob, const PhaseSearchOptions& options = {},
    double tol = kPsdTol);

struct PiSearchOptions {
  std::size_t max_iterations = 10000;
  double residual_target = 1e-9;
  double tol = kPsdTol;
};

struct PiSearchOutcome {
  std::optional<PiMatrix> pi;  // always verified before being returned
  std::size_t iterations = 0;
  double final_residual = 0.0;
  // Whether the problem was proven infeasible on the way (deterministic
  // closed form with a non-PSD forced candidate, or a forced-zero
  // conflict).
  bool proven_infeasible = false;
};

// Heuristic certificate search: closed-form candidates first, then
// alternating projections between {PSD, diagonal = p} and the set where
// the overlap residual is PSD. Finding nothing proves nothing.
PiSearchOutcome pi_search(const TransformProblem& prob,
                          const PiSearchOptions& options = {});

}  // namespace qop::transform
