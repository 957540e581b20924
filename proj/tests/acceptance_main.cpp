// Acceptance suite: every release-gating criterion in one binary, one
// pass/fail line per criterion. Returns the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qop/channel.hpp"
#include "qop/linalg.hpp"
#include "qop/majorize.hpp"
#include "qop/random.hpp"
#include "qop/states.hpp"
#include "qop/transform.hpp"

using namespace qop;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;
using rng::Engine;

namespace {

struct Criterion {
  int number;
  std::string summary;
  std::function<bool(std::string&)> body;
  double time_budget_s = 0.0;  // 0 = no budget
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", x);
  return buf;
}

states::PureStateSet states_with_gram(const HermitianMatrix& gram) {
  const ComplexMatrix c = linalg::factor_psd(gram, gram.dim());
  std::vector<std::vector<Complex>> cols;
  for (std::size_t j = 0; j < gram.dim(); ++j) cols.push_back(c.column(j));
  return states::PureStateSet(gram.dim(), std::move(cols));
}

// --- criterion 1: uniform-probability discrimination bound ---------------

bool criterion_usd_uniform(std::string& detail) {
  Engine eng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dims(2, 8);
    const states::PureStateSet pair = rng::state_set(eng, dims(eng), 2);
    const double expected =
        1.0 - std::abs(linalg::inner(pair.state(0), pair.state(1)));
    const double got = transform::usd_max_uniform(pair);
    worst = std::max(worst, std::abs(got - expected));
  }

  std::uniform_real_distribution<double> overlaps(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const double s = overlaps(eng);
    ComplexMatrix gram(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) gram(i, j) = i == j ? 1.0 : s;
    }
    const states::PureStateSet sym = states_with_gram(HermitianMatrix(gram));
    worst = std::max(worst, std::abs(transform::usd_max_uniform(sym) - (1.0 - s)));
  }
  detail = "max gap " + sci(worst);
  return worst <= 1e-9;
}

// --- criterion 2: certificate-to-operators round trip --------------------

bool criterion_round_trip(std::string& detail) {
  Engine eng(2002);
  double worst_prob = 0.0, worst_fid = 0.0, worst_eig = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dims(2, 8);
    const std::size_t d = dims(eng);
    std::uniform_int_distribution<std::size_t> counts(1, d);
    const std::size_t n = counts(eng);
    const rng::ForwardInstance inst = rng::probabilistic_feasible_instance(eng, n, d);
    if (!transform::verify_pi(inst.problem, inst.pi).feasible) return false;

    const channel::KrausSet kraus = transform::kraus_from_pi(inst.problem, inst.pi);
    const HermitianMatrix e_s = channel::povm_element(kraus, "success");
    worst_eig = std::max(worst_eig,
                         linalg::hermitian_eig(e_s).eigenvalues.front() - 1.0);

    for (std::size_t j = 0; j < n; ++j) {
      const auto rho =
          channel::DensityOperator::pure(inst.problem.initial_states().state(j));
      const double p = channel::outcome_probability(kraus, "success", rho);
      worst_prob = std::max(
          worst_prob, std::abs(p - inst.problem.probabilities()[j]));
      if (p < 1e-6) continue;
      const auto post = channel::post_measurement_state(kraus, "success", rho);
      const std::vector<Complex>& target = inst.problem.final_states().state(j);
      Complex fid = 0.0;
      for (std::size_t a = 0; a < target.size(); ++a) {
        for (std::size_t b = 0; b < target.size(); ++b) {
          fid += std::conj(target[a]) * post.matrix()(a, b) * target[b];
        }
      }
      worst_fid = std::max(worst_fid, 1.0 - fid.real());
    }
  }
  detail = "prob gap " + sci(worst_prob) + ", fidelity gap " + sci(worst_fid) +
           ", max-eig excess " + sci(worst_eig);
  return worst_prob <= 1e-8 && worst_fid <= 1e-8 && worst_eig <= 1e-9;
}

// --- criterion 3: extracted coefficients always verify -------------------

bool criterion_necessity(std::string& detail) {
  Engine eng(3003);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dims(2, 8);
    const std::size_t d = dims(eng);
    std::uniform_int_distribution<std::size_t> counts(1, d);
    const std::size_t n = counts(eng);
    std::uniform_int_distribution<std::size_t> op_counts(1, 3);
    const std::size_t m = op_counts(eng);

    const states::PureStateSet initial = rng::independent_state_set(eng, d, n);
    const states::PureStateSet targets = rng::state_set(eng, d, n);
    const auto duals = states::reciprocal_vectors(initial);
    ComplexMatrix coeffs = rng::matrix(eng, m, n);
    auto ops = transform::success_operators(targets, duals, initial, coeffs);

    ComplexMatrix e_s(d, d);
    for (const auto& a : ops) e_s += a.adjoint() * a;
    const double top =
        linalg::hermitian_eig(HermitianMatrix(e_s)).eigenvalues.front();
    const double shrink = 1.0 / std::sqrt(top * 1.02);
    for (auto& a : ops) a *= Complex(shrink, 0.0);

    ComplexMatrix extracted(m, n);
    std::vector<double> p(n, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        const Complex c =
            linalg::inner(targets.state(j), ops[k].apply(initial.state(j)));
        extracted(k, j) = c;
        p[j] += std::norm(c);
      }
    }
    const transform::TransformProblem prob(initial, targets, p);
    const HermitianMatrix pi(extracted.adjoint() * extracted);
    const auto cert = transform::verify_pi(prob, pi, 1e-8);
    if (!cert.feasible) {
      detail = "trial " + std::to_string(trial) + " failed verify";
      return false;
    }
  }
  detail = "200 extracted certificates verified at 1e-8";
  return true;
}

// --- criterion 4: unit-probability residual vanishes ----------------------

bool criterion_deterministic_trace(std::string& detail) {
  Engine eng(4004);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> counts(2, 6);
    const rng::ForwardInstance inst =
        rng::deterministic_feasible_instance(eng, counts(eng));
    const auto cert = transform::deterministic_pi(inst.problem);
    if (!cert.feasible) {
      detail = "forward deterministic instance reported infeasible";
      return false;
    }
    const ComplexMatrix g1 =
        states::gram_matrix(inst.problem.initial_states()).matrix();
    const ComplexMatrix g2 =
        states::gram_matrix(inst.problem.final_states()).matrix();
    worst = std::max(
        worst, (g1 - linalg::hadamard(cert.pi.matrix(), g2)).frobenius_norm());
  }
  if (worst > 1e-9) {
    detail = "residual " + sci(worst);
    return false;
  }

  // Tightening pair with the pinned witness -0.8.
  const auto make_pair = [](double gamma) {
    return states::PureStateSet(
        2, {{Complex(1, 0), Complex(0, 0)},
            {Complex(gamma, 0), Complex(std::sqrt(1 - gamma * gamma), 0)}});
  };
  const transform::TransformProblem tightening(make_pair(0.9), make_pair(0.5),
                                               {1.0, 1.0});
  const auto cert = transform::deterministic_pi(tightening);
  detail = "max residual " + sci(worst) + ", witness " +
           std::to_string(cert.pi_positive.witness);
  return !cert.feasible && std::abs(cert.pi_positive.witness + 0.8) <= 1e-9;
}

// --- criterion 5: mixing enhancement, both directions ---------------------

bool criterion_mixing_both_directions(std::string& detail) {
  Engine eng(5005);
  std::uniform_int_distribution<std::size_t> dims(2, 8);

  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = dims(eng);
    std::uniform_int_distribution<std::size_t> ops(1, 4);
    const channel::KrausSet k = trial % 2 == 0
                                    ? rng::random_unitary_kraus(eng, d, ops(eng))
                                    : rng::sqrt_povm_kraus(eng, d, 1 + ops(eng));
    if (!channel::is_unital(k).pass) {
      detail = "unital generator produced a non-unital set";
      return false;
    }
    const auto rho1 = rng::density(eng, d);
    const auto rho2 = channel::apply_channel(k, rho1);
    if (!majorize::majorizes(rho1.spectrum(), rho2.spectrum(), 1e-9).holds) {
      detail = "unital trial " + std::to_string(trial) + " broke majorization";
      return false;
    }
  }

  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = dims(eng);
    std::uniform_int_distribution<std::size_t> ops(2, 4);
    const channel::KrausSet k = rng::nonunital_kraus(eng, d, ops(eng));
    const auto verdict = channel::is_unital(k);
    const auto mixed = channel::DensityOperator::maximally_mixed(d);
    const auto out = channel::apply_channel(k, mixed);
    ComplexMatrix gap = out.matrix();
    for (std::size_t i = 0; i < d; ++i) gap(i, i) -= 1.0 / static_cast<double>(d);
    const double moved = gap.frobenius_norm();
    if (moved <= 0.0 ||
        std::abs(moved - verdict.defect / static_cast<double>(d)) > 1e-9) {
      detail = "motion " + std::to_string(moved) + " vs defect/D " +
               std::to_string(verdict.defect / static_cast<double>(d));
      return false;
    }
  }

  // The state-preparation channel breaks the majorization at 1/D.
  const channel::KrausSet prep = rng::measure_and_reprepare(eng, 4);
  const auto mixed = channel::DensityOperator::maximally_mixed(4);
  const auto out = channel::apply_channel(prep, mixed);
  if (majorize::majorizes(mixed.spectrum(), out.spectrum(), 1e-9).holds) {
    detail = "state preparation kept the majorization at 1/D";
    return false;
  }
  detail = "500 unital + 500 non-unital draws";
  return true;
}

// --- criterion 6: transfer-matrix sums -------------------------------------

bool criterion_transfer_sums(std::string& detail) {
  Engine eng(6006);
  std::uniform_int_distribution<std::size_t> dims(2, 6);
  int unital_draws = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = dims(eng);
    std::uniform_int_distribution<std::size_t> ops(1, 4);
    const bool want_unital = trial % 2 == 0;
    const channel::KrausSet k = want_unital
                                    ? rng::random_unitary_kraus(eng, d, ops(eng))
                                    : rng::nonunital_kraus(eng, d, 1 + ops(eng));
    // For non-unital draws the maximally mixed input pins the per-output
    // sums to the eigenvalues of sum A A^dagger.
    const auto rho1 = want_unital ? rng::density(eng, d)
                                  : channel::DensityOperator::maximally_mixed(d);
    const auto rho2 = channel::apply_channel(k, rho1);
    const auto s = channel::transfer_matrix(k, rho1, rho2);

    for (double sum : s.per_input_sums()) {
      if (std::abs(sum - 1.0) > 1e-9) {
        detail = "trace-preserving row sum " + std::to_string(sum);
        return false;
      }
    }
    const bool unital = channel::is_unital(k).pass;
    double worst_col = 0.0;
    for (double sum : s.per_output_sums()) {
      worst_col = std::max(worst_col, std::abs(sum - 1.0));
    }
    if (unital) {
      ++unital_draws;
      if (worst_col > 1e-9) {
        detail = "unital column sum off by " + std::to_string(worst_col);
        return false;
      }
    } else if (worst_col <= 1e-9) {
      detail = "non-unital draw with stochastic columns";
      return false;
    }
  }
  detail = std::to_string(unital_draws) + "/500 draws unital";
  return true;
}

// --- criterion 7: deterministic ensembles only get less mixed -------------

bool criterion_ensemble_pipeline(std::string& detail) {
  Engine eng(7007);
  std::uniform_int_distribution<std::size_t> counts(2, 6);
  double worst_spectrum_gap = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const rng::ForwardInstance inst =
        rng::deterministic_feasible_instance(eng, counts(eng));
    const std::vector<double> q =
        rng::probability_vector(eng, inst.problem.size());
    const auto report = majorize::theorem3_check(inst.problem, q);
    if (!report.hypothesis_met || !report.majorization.holds) {
      detail = "trial " + std::to_string(trial) + " broke the majorization";
      return false;
    }
    worst_spectrum_gap = std::max({worst_spectrum_gap, report.initial_spectrum_gap,
                                   report.final_spectrum_gap});
    if (worst_spectrum_gap > 1e-9) {
      detail = "density/weighted-Gram spectra differ by " +
               std::to_string(worst_spectrum_gap);
      return false;
    }
  }

  Engine eng2(7117);
  std::uniform_int_distribution<std::size_t> dims(2, 6);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = dims(eng2);
    const auto result = majorize::bapat_sunder_check(rng::correlation(eng2, d),
                                                     rng::hermitian(eng2, d), 1e-9);
    if (!result.verdict.holds) {
      detail = "Hadamard-majorization trial " + std::to_string(trial) + " failed";
      return false;
    }
  }
  detail = "300 ensemble draws, 500 Hadamard draws, spectra gap " +
           sci(worst_spectrum_gap);
  return true;
}

// --- criterion 8: cloning feasibility ---------------------------------------

bool criterion_no_cloning(std::string& detail) {
  Engine eng(8008);
  std::uniform_int_distribution<std::size_t> dims(2, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = dims(eng);
    states::PureStateSet pair = rng::state_set(eng, d, 2);
    double overlap = std::abs(linalg::inner(pair.state(0), pair.state(1)));
    while (overlap < 0.05 || overlap > 0.95) {
      pair = rng::state_set(eng, d, 2);
      overlap = std::abs(linalg::inner(pair.state(0), pair.state(1)));
    }
    std::vector<std::vector<Complex>> doubled;
    for (std::size_t j = 0; j < 2; ++j) {
      doubled.push_back(states::tensor_product(pair.state(j), pair.state(j)));
    }
    const transform::TransformProblem cloning(
        pair, states::PureStateSet(d * d, std::move(doubled)), {1.0, 1.0});
    if (transform::deterministic_pi(cloning).feasible) {
      detail = "cloned a pair with overlap " + std::to_string(overlap);
      return false;
    }

    const ComplexMatrix u = rng::unitary(eng, d);
    std::vector<std::vector<Complex>> ortho = {u.column(0), u.column(1)};
    std::vector<std::vector<Complex>> ortho_doubled;
    for (const auto& s : ortho) ortho_doubled.push_back(states::tensor_product(s, s));
    const transform::TransformProblem ortho_cloning(
        states::PureStateSet(d, std::move(ortho)),
        states::PureStateSet(d * d, std::move(ortho_doubled)), {1.0, 1.0});
    if (!transform::deterministic_pi(ortho_cloning).feasible) {
      detail = "orthogonal pair reported uncloneable";
      return false;
    }
  }
  detail = "100 non-orthogonal + 100 orthogonal pairs";
  return true;
}

// --- criterion 9: predicate agrees with a brute-force reference -----------

bool reference_majorizes(std::vector<double> lam, std::vector<double> sig,
                         double tol) {
  const std::size_t n = std::max(lam.size(), sig.size());
  lam.resize(n, 0.0);
  sig.resize(n, 0.0);
  std::sort(lam.rbegin(), lam.rend());
  std::sort(sig.rbegin(), sig.rend());
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    a += lam[k];
    b += sig[k];
    if (b > a + tol) return false;
  }
  a += lam[n - 1];
  b += sig[n - 1];
  return std::abs(a - b) <= tol;
}

bool criterion_majorization_oracle(std::string& detail) {
  Engine eng(9009);
  std::uniform_int_distribution<std::size_t> lens(1, 10);
  std::uniform_real_distribution<double> reals(-0.2, 1.0);
  std::uniform_int_distribution<int> styles(0, 3);

  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t nl = lens(eng);
    const std::size_t ns = lens(eng);
    std::vector<double> lam(nl), sig(ns);
    switch (styles(eng)) {
      case 0:  // arbitrary reals, usually unequal totals
        for (double& x : lam) x = reals(eng);
        for (double& x : sig) x = reals(eng);
        break;
      case 1:  // probability vectors
        lam = rng::probability_vector(eng, nl);
        sig = rng::probability_vector(eng, ns);
        break;
      case 2: {  // genuinely majorizing pairs of equal length
        lam = rng::probability_vector(eng, nl);
        sig.assign(nl, 0.0);
        const std::vector<double> w = rng::probability_vector(eng, 3);
        for (double weight : w) {
          std::vector<std::size_t> perm(nl);
          for (std::size_t i = 0; i < nl; ++i) perm[i] = i;
          std::shuffle(perm.begin(), perm.end(), eng);
          for (std::size_t i = 0; i < nl; ++i) sig[i] += weight * lam[perm[i]];
        }
        break;
      }
      default:  // exact ties
        lam = rng::probability_vector(eng, nl);
        sig = lam;
        std::shuffle(sig.begin(), sig.end(), eng);
        break;
    }
    const bool expected = reference_majorizes(lam, sig, 1e-9);
    const bool got = majorize::majorizes(lam, sig, 1e-9).holds;
    if (expected != got) {
      detail = "disagreement on trial " + std::to_string(trial);
      return false;
    }
  }

  // Witness soundness on majorizing pairs.
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = lens(eng);
    std::vector<double> lam = rng::probability_vector(eng, n);
    std::vector<double> sig(n, 0.0);
    const std::vector<double> w = rng::probability_vector(eng, 3);
    for (double weight : w) {
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), eng);
      for (std::size_t i = 0; i < n; ++i) sig[i] += weight * lam[perm[i]];
    }
    const auto witness = majorize::ds_witness(lam, sig, 1e-9);
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (witness(i, j) < 0.0 || witness(j, i) < 0.0) {
          detail = "witness has a negative entry";
          return false;
        }
        row += witness(i, j);
        col += witness(j, i);
      }
      if (std::abs(row - 1.0) > 1e-9 || std::abs(col - 1.0) > 1e-9) {
        detail = "witness row/col sum off by " +
                 sci(std::max(std::abs(row - 1.0), std::abs(col - 1.0)));
        return false;
      }
    }
    std::sort(lam.rbegin(), lam.rend());
    std::sort(sig.rbegin(), sig.rend());
    const auto mapped = witness.apply(lam);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(mapped[i] - sig[i]) > 1e-9) {
        detail = "witness missed slot " + std::to_string(i) + " by " +
                 std::to_string(std::abs(mapped[i] - sig[i]));
        return false;
      }
    }
  }
  detail = "10000 predicate pairs, 500 witnesses";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "uniform discrimination bound", criterion_usd_uniform, 1.0},
      {2, "certificate round trip", criterion_round_trip, 10.0},
      {3, "extracted certificates verify", criterion_necessity, 0.0},
      {4, "deterministic residual and witness", criterion_deterministic_trace, 0.0},
      {5, "mixing enhancement both directions", criterion_mixing_both_directions, 30.0},
      {6, "transfer matrix sums", criterion_transfer_sums, 0.0},
      {7, "ensemble mixing pipeline", criterion_ensemble_pipeline, 0.0},
      {8, "cloning feasibility", criterion_no_cloning, 0.0},
      {9, "majorization oracle equivalence", criterion_majorization_oracle, 0.0},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.time_budget_s > 0.0 && elapsed > c.time_budget_s) {
      ok = false;
      detail += " [over time budget " + std::to_string(c.time_budget_s) + "s]";
    }
    std::printf("[%s] criterion %d: %s (%s, %.2fs)\n", ok ? "PASS" : "FAIL",
                c.number, c.summary.c_str(), detail.c_str(), elapsed);
    if (!ok) ++failures;
  }
  return failures;
}
