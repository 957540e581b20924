#include "qop/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qop/error.hpp"
#include "qop/json_io.hpp"
#include "qop/majorize.hpp"
#include "qop/random.hpp"
#include "qop/selftest.hpp"
#include "qop/transform.hpp"

namespace qop::cli {

using linalg::Complex;
using linalg::ComplexMatrix;

namespace {

struct CommandContext {
  const Options& options;
  ProblemFile file;
  double tol;
  bool bare_output = false;  // human mode prints the value alone
};

double effective_tol(const Options& options, const ProblemFile& file) {
  if (options.tol) return *options.tol;
  if (file.tolerance) return *file.tolerance;
  return kPsdTol;
}

const Json& field(const Json& payload, const std::string& key) {
  if (!payload.contains(key)) {
    throw DomainError("payload is missing required field '" + key + "'");
  }
  return payload[key];
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void human_line(std::ostream& out, const std::string& name, const std::string& value) {
  out << "  " << std::left << std::setw(28) << name << value << "\n";
}

void human_certificate(std::ostream& out, const transform::Certificate& cert) {
  std::ostringstream w;
  w.precision(6);
  w << std::scientific;
  human_line(out, "feasible", yes_no(cert.feasible));
  w.str("");
  w << yes_no(cert.pi_positive.pass) << "  (min eigenvalue " << cert.pi_positive.witness << ")";
  human_line(out, "pi positive", w.str());
  w.str("");
  w << yes_no(cert.diagonal_matches.pass) << "  (max deviation " << cert.diagonal_matches.witness << ")";
  human_line(out, "diagonal matches p", w.str());
  w.str("");
  w << yes_no(cert.residual_positive.pass) << "  (min eigenvalue " << cert.residual_positive.witness << ")";
  human_line(out, "residual positive", w.str());
  human_line(out, "sufficiency applies", yes_no(cert.sufficiency_applies));
  if (cert.zero_overlap_conflict) {
    human_line(out, "zero-overlap conflict",
               "(" + std::to_string((*cert.zero_overlap_conflict)[0]) + "," +
                   std::to_string((*cert.zero_overlap_conflict)[1]) + ")");
  }
}

transform::TransformProblem parse_transform_problem(const Json& payload,
                                                    bool probabilities_required) {
  states::PureStateSet initial = parse_state_set(field(payload, "initial"));
  states::PureStateSet finals = parse_state_set(field(payload, "final"));
  std::vector<double> p;
  if (payload.contains("probabilities")) {
    p = parse_real_vector(payload["probabilities"]);
  } else if (probabilities_required) {
    throw DomainError("payload is missing required field 'probabilities'");
  } else {
    p.assign(initial.size(), 1.0);
  }
  return transform::TransformProblem(std::move(initial), std::move(finals),
                                     std::move(p));
}

channel::KrausSet parse_kraus(const Json& payload) {
  const Json& ops_json = field(payload, "operators");
  if (!ops_json.is_array() || ops_json.empty()) {
    throw DomainError("'operators' must be a nonempty array of matrices");
  }
  std::vector<ComplexMatrix> ops;
  for (const Json& m : ops_json) ops.push_back(parse_matrix(m));
  if (payload.contains("labels")) {
    const Json& labels_json = payload["labels"];
    if (!labels_json.is_array() || labels_json.size() != ops.size()) {
      throw DomainError("'labels' must list one string per operator");
    }
    std::vector<std::string> labels;
    for (const Json& l : labels_json) {
      if (!l.is_string()) throw DomainError("'labels' must list strings");
      labels.push_back(l.get<std::string>());
    }
    return channel::KrausSet(std::move(ops), std::move(labels));
  }
  return channel::KrausSet(std::move(ops), std::string("all"));
}

channel::DensityOperator parse_rho_or_mixed(const Json& payload, std::size_t dim,
                                            double tol) {
  if (payload.contains("rho")) {
    return channel::DensityOperator(linalg::HermitianMatrix(parse_matrix(payload["rho"])),
                                    tol);
  }
  return channel::DensityOperator::maximally_mixed(dim);
}

void require_kind(const CommandContext& ctx, std::initializer_list<const char*> kinds) {
  for (const char* k : kinds) {
    if (ctx.file.kind == k) return;
  }
  std::string expected;
  for (const char* k : kinds) {
    if (!expected.empty()) expected += "' or '";
    expected += k;
  }
  throw DomainError("command '" + ctx.options.command + "' expects kind '" +
                    expected + "', got '" + ctx.file.kind + "'");
}

// ---- command handlers ------------------------------------------------------

int cmd_feasible(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"transform", "deterministic"});
  const transform::TransformProblem prob =
      parse_transform_problem(ctx.file.payload, ctx.file.kind == "transform");

  transform::PiSearchOptions search;
  search.tol = ctx.tol;
  search.residual_target = std::min(search.residual_target, ctx.tol);
  const transform::PiSearchOutcome outcome = transform::pi_search(prob, search);

  report["feasible"] = outcome.pi.has_value();
  report["proven_infeasible"] = outcome.proven_infeasible;
  report["iterations"] = outcome.iterations;
  report["final_residual"] = outcome.final_residual;
  if (outcome.pi) {
    const transform::Certificate cert = transform::verify_pi(prob, *outcome.pi, ctx.tol);
    report["certificate"] = certificate_to_json(cert);
    human_certificate(human, cert);
  } else {
    human_line(human, "feasible", "no");
    human_line(human, "proven infeasible", yes_no(outcome.proven_infeasible));
    human_line(human, "iterations", std::to_string(outcome.iterations));
  }
  return outcome.pi ? kExitHolds : kExitViolated;
}

int cmd_verify_pi(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"transform"});
  const transform::TransformProblem prob =
      parse_transform_problem(ctx.file.payload, true);
  const transform::PiMatrix pi(parse_matrix(field(ctx.file.payload, "pi")));
  const transform::Certificate cert = transform::verify_pi(prob, pi, ctx.tol);
  report["certificate"] = certificate_to_json(cert);
  human_certificate(human, cert);
  return cert.feasible ? kExitHolds : kExitViolated;
}

int cmd_kraus(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"transform", "deterministic"});
  const transform::TransformProblem prob =
      parse_transform_problem(ctx.file.payload, ctx.file.kind == "transform");

  std::optional<transform::PiMatrix> pi;
  if (ctx.file.payload.contains("pi")) {
    pi = transform::PiMatrix(parse_matrix(ctx.file.payload["pi"]));
  } else {
    transform::PiSearchOptions search;
    search.tol = ctx.tol;
    const transform::PiSearchOutcome outcome = transform::pi_search(prob, search);
    report["proven_infeasible"] = outcome.proven_infeasible;
    if (outcome.pi) pi = outcome.pi;
  }
  if (!pi) {
    report["feasible"] = false;
    human_line(human, "feasible", "no (no certificate found)");
    return kExitViolated;
  }
  const transform::Certificate cert = transform::verify_pi(prob, *pi, ctx.tol);
  report["certificate"] = certificate_to_json(cert);
  if (!cert.feasible) {
    report["feasible"] = false;
    human_certificate(human, cert);
    return kExitViolated;
  }
  const channel::KrausSet kraus = transform::kraus_from_pi(prob, *pi, ctx.tol);
  report["feasible"] = true;
  report["kraus"] = kraus_to_json(kraus);
  human_certificate(human, cert);
  human_line(human, "operators", std::to_string(kraus.size()));
  std::ostringstream defect;
  defect.precision(6);
  defect << std::scientific << kraus.completeness_defect();
  human_line(human, "completeness defect", defect.str());
  return kExitHolds;
}

int cmd_usd(CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"usd"});
  const states::PureStateSet initial =
      parse_state_set(field(ctx.file.payload, "initial"));

  if (ctx.options.max_uniform) {
    const double p = transform::usd_max_uniform(initial);
    report["max_uniform_probability"] = p;
    ctx.bare_output = true;
    human << p << "\n";
    return kExitHolds;
  }

  std::vector<double> p;
  if (ctx.file.payload.contains("probabilities")) {
    p = parse_real_vector(ctx.file.payload["probabilities"]);
  } else {
    p.assign(initial.size(), transform::usd_max_uniform(initial));
    report["probabilities_used"] = real_vector_to_json(p);
  }
  const transform::Certificate cert = transform::usd_feasible(initial, p, ctx.tol);
  report["certificate"] = certificate_to_json(cert);
  human_certificate(human, cert);
  return cert.feasible ? kExitHolds : kExitViolated;
}

int cmd_det(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"deterministic", "transform"});
  const transform::TransformProblem prob =
      parse_transform_problem(ctx.file.payload, false);
  const transform::Certificate cert = transform::deterministic_pi(prob, ctx.tol);
  report["certificate"] = certificate_to_json(cert);
  human_certificate(human, cert);
  return cert.feasible ? kExitHolds : kExitViolated;
}

int cmd_simulate(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"channel"});
  const channel::KrausSet kraus = parse_kraus(ctx.file.payload);
  const channel::DensityOperator rho =
      parse_rho_or_mixed(ctx.file.payload, kraus.in_dim(), ctx.tol);

  const channel::DefectVerdict tp = channel::is_trace_preserving(kraus, ctx.tol);
  report["trace_preserving"] = Json{{"pass", tp.pass}, {"defect", tp.defect}};

  Json outcomes;
  for (const std::string& label : kraus.outcome_labels()) {
    const double p = channel::outcome_probability(kraus, label, rho);
    Json o;
    o["probability"] = p;
    if (p > kZeroTol) {
      const channel::DensityOperator post =
          channel::post_measurement_state(kraus, label, rho);
      o["post_state"] = matrix_to_json(post.matrix());
      o["spectrum"] = real_vector_to_json(post.spectrum());
    }
    outcomes[label] = std::move(o);
    std::ostringstream line;
    line.precision(10);
    line << p;
    human_line(human, "p[" + label + "]", line.str());
  }
  report["outcomes"] = std::move(outcomes);

  if (tp.pass) {
    const channel::DensityOperator out = channel::apply_channel(kraus, rho, ctx.tol);
    Json o;
    o["state"] = matrix_to_json(out.matrix());
    o["spectrum"] = real_vector_to_json(out.spectrum());
    o["entropy_bits"] = majorize::von_neumann_entropy(out);
    report["output"] = std::move(o);
    std::ostringstream line;
    line.precision(10);
    line << majorize::von_neumann_entropy(out);
    human_line(human, "output entropy (bits)", line.str());
  }
  return kExitHolds;
}

int cmd_unital(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"channel"});
  const channel::KrausSet kraus = parse_kraus(ctx.file.payload);
  const channel::DefectVerdict tp = channel::is_trace_preserving(kraus, ctx.tol);
  const channel::UnitalVerdict unital = channel::is_unital(kraus, ctx.tol);
  report["trace_preserving"] = Json{{"pass", tp.pass}, {"defect", tp.defect}};
  report["unital"] = Json{{"applicable", unital.applicable},
                          {"pass", unital.pass},
                          {"defect", unital.defect},
                          {"fixed_point_defect", unital.fixed_point_defect}};
  std::ostringstream w;
  w.precision(6);
  w << std::scientific;
  human_line(human, "trace preserving", yes_no(tp.pass));
  if (!unital.applicable) {
    human_line(human, "unital", "not applicable (rectangular)");
  } else {
    w << unital.defect;
    human_line(human, "unital", yes_no(unital.pass) + "  (defect " + w.str() + ")");
  }
  return unital.applicable && unital.pass ? kExitHolds : kExitViolated;
}

int cmd_transfer(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"channel"});
  const channel::KrausSet kraus = parse_kraus(ctx.file.payload);
  const channel::DensityOperator rho1 =
      parse_rho_or_mixed(ctx.file.payload, kraus.in_dim(), ctx.tol);
  const channel::DensityOperator rho2 = channel::apply_channel(kraus, rho1, ctx.tol);
  const channel::TransferMatrix s = channel::transfer_matrix(kraus, rho1, rho2);

  Json matrix = Json::array();
  for (std::size_t i = 0; i < s.out_dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < s.in_dim(); ++j) row.push_back(s(i, j));
    matrix.push_back(std::move(row));
  }
  Json t;
  t["matrix"] = std::move(matrix);
  // Sums over the output index, one per input eigenvector: 1 when
  // trace-preserving.
  t["row_sums"] = real_vector_to_json(s.per_input_sums());
  // Sums over the input index, one per output eigenvector: 1 iff unital.
  t["col_sums"] = real_vector_to_json(s.per_output_sums());
  t["reconstruction_residual"] = s.reconstruction_residual;
  report["transfer"] = std::move(t);
  report["lambda_in"] = real_vector_to_json(rho1.spectrum());
  report["lambda_out"] = real_vector_to_json(rho2.spectrum());

  const channel::UnitalVerdict unital = channel::is_unital(kraus, ctx.tol);
  report["unital"] = Json{{"applicable", unital.applicable},
                          {"pass", unital.pass},
                          {"defect", unital.defect}};
  report["majorization"] =
      majorization_to_json(majorize::majorizes(rho1.spectrum(), rho2.spectrum(), ctx.tol));

  human_line(human, "transfer matrix", std::to_string(s.out_dim()) + "x" +
                                           std::to_string(s.in_dim()));
  human_line(human, "unital", yes_no(unital.applicable && unital.pass));
  std::ostringstream w;
  w.precision(6);
  w << std::scientific << s.reconstruction_residual;
  human_line(human, "lambda residual", w.str());
  return kExitHolds;
}

int cmd_majorize(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"majorize"});
  const std::vector<double> lambda = parse_real_vector(field(ctx.file.payload, "lambda"));
  const std::vector<double> sigma = parse_real_vector(field(ctx.file.payload, "sigma"));
  const majorize::MajorizationVerdict verdict =
      majorize::majorizes(lambda, sigma, ctx.tol);
  report["majorizes"] = majorization_to_json(verdict);
  human_line(human, "sigma < lambda", yes_no(verdict.holds));
  if (verdict.violated_prefix) {
    human_line(human, "violated prefix", std::to_string(*verdict.violated_prefix));
  }
  if (verdict.holds) {
    const majorize::DoublyStochasticMatrix witness =
        majorize::ds_witness(lambda, sigma, ctx.tol);
    Json rows = Json::array();
    for (std::size_t i = 0; i < witness.size(); ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < witness.size(); ++j) row.push_back(witness(i, j));
      rows.push_back(std::move(row));
    }
    report["witness"] = std::move(rows);
  }
  return verdict.holds ? kExitHolds : kExitViolated;
}

int cmd_theorem3(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"theorem3"});
  states::PureStateSet initial = parse_state_set(field(ctx.file.payload, "initial"));
  states::PureStateSet finals = parse_state_set(field(ctx.file.payload, "final"));
  const std::vector<double> q = parse_real_vector(field(ctx.file.payload, "priors"));
  const transform::TransformProblem prob(
      std::move(initial), std::move(finals),
      std::vector<double>(q.size(), 1.0));
  const majorize::DeterministicMixingReport mixing =
      majorize::theorem3_check(prob, q, ctx.tol);
  report["report"] = mixing_report_to_json(mixing);
  human_line(human, "hypothesis met", yes_no(mixing.hypothesis_met));
  if (mixing.hypothesis_met) {
    human_line(human, "majorization holds", yes_no(mixing.majorization.holds));
    std::ostringstream w;
    w.precision(6);
    w << std::scientific << mixing.gram_identity_residual;
    human_line(human, "gram identity residual", w.str());
  }
  human_line(human, "holds", yes_no(mixing.holds));
  return mixing.holds ? kExitHolds : kExitViolated;
}

int cmd_monotones(const CommandContext& ctx, Json& report, std::ostream& human) {
  require_kind(ctx, {"monotones"});
  states::PureStateSet set = parse_state_set(field(ctx.file.payload, "states"));
  const std::vector<double> q = parse_real_vector(field(ctx.file.payload, "priors"));
  const states::Ensemble e(std::move(set), q);

  const std::size_t slots = std::max(e.size(), e.states().dim());
  std::vector<double> mus;
  for (std::size_t k = 1; k <= slots; ++k) mus.push_back(majorize::monotones(e, k));
  report["partial_sums"] = real_vector_to_json(mus);
  report["entropy_bits"] = majorize::von_neumann_entropy(states::ensemble_density(e));
  if (ctx.file.payload.contains("k")) {
    const Json& kj = ctx.file.payload["k"];
    if (!kj.is_number_unsigned() || kj.get<std::size_t>() < 1) {
      throw DomainError("'k' must be a positive integer");
    }
    report["mu_k"] = majorize::monotones(e, kj.get<std::size_t>());
  }
  for (std::size_t k = 1; k <= slots; ++k) {
    std::ostringstream line;
    line.precision(10);
    line << mus[k - 1];
    human_line(human, "mu_" + std::to_string(k), line.str());
  }
  return kExitHolds;
}

int cmd_selftest(const Options& options, Json& report, std::ostream& human) {
  if (options.trials < 1) {
    throw DomainError("selftest requires at least one trial");
  }
  const std::uint64_t seed = options.seed.value_or(1);
  const auto results = selftest::run(seed, options.trials);
  report["seed"] = seed;
  report["trials"] = options.trials;
  Json props = Json::array();
  for (const auto& r : results) {
    Json p;
    p["module"] = r.module;
    p["property"] = r.name;
    p["trials"] = r.trials;
    p["failures"] = r.failures;
    p["informational"] = r.informational;
    if (r.first_failure_seed) {
      p["first_failure_seed"] = *r.first_failure_seed;
      const Json ce = Json::parse(r.first_failure_detail, nullptr, false);
      p["counterexample"] = ce.is_discarded() ? Json(r.first_failure_detail) : ce;
    }
    if (!r.note.empty()) p["note"] = r.note;
    props.push_back(std::move(p));

    std::string status = r.informational ? "info" : (r.failures == 0 ? "pass" : "FAIL");
    std::ostringstream line;
    line << std::left << std::setw(6) << status << r.module << "." << r.name;
    if (r.failures > 0) {
      line << "  (" << r.failures << "/" << r.trials << " failures, seed "
           << *r.first_failure_seed << " " << r.first_failure_detail << ")";
    }
    if (!r.note.empty()) line << "  [" << r.note << "]";
    human << line.str() << "\n";
  }
  report["properties"] = std::move(props);
  const bool ok = selftest::all_passed(results);
  report["all_passed"] = ok;
  return ok ? kExitHolds : kExitViolated;
}

void emit(const Options& options, const Json& report, const std::string& human_text,
          double elapsed_ms, bool bare, std::ostream& out) {
  std::string text;
  if (options.json) {
    text = report.dump(2) + "\n";
  } else if (bare) {
    text = human_text;
  } else {
    std::ostringstream os;
    os << report["command"].get<std::string>() << "\n" << human_text;
    os << "  " << std::left << std::setw(28) << "elapsed_ms"
       << std::fixed << std::setprecision(1) << elapsed_ms << "\n";
    text = os.str();
  }
  if (options.out_path) {
    std::ofstream f(*options.out_path);
    if (!f) throw DomainError("cannot open output file '" + *options.out_path + "'");
    f << text;
  } else {
    out << text;
  }
}

}  // namespace

int run(const Options& options, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Json report;
  report["command"] = options.command;
  std::ostringstream human;
  int code = kExitHolds;
  bool bare = false;

  try {
    if (options.command == "selftest") {
      code = cmd_selftest(options, report, human);
    } else {
      CommandContext ctx{options, load_problem_file(options.input_path), 0.0};
      ctx.tol = effective_tol(options, ctx.file);
      report["tolerance"] = ctx.tol;

      if (options.command == "feasible") {
        code = cmd_feasible(ctx, report, human);
      } else if (options.command == "verify-pi") {
        code = cmd_verify_pi(ctx, report, human);
      } else if (options.command == "kraus") {
        code = cmd_kraus(ctx, report, human);
      } else if (options.command == "usd") {
        code = cmd_usd(ctx, report, human);
        bare = ctx.bare_output;
      } else if (options.command == "det") {
        code = cmd_det(ctx, report, human);
      } else if (options.command == "simulate") {
        code = cmd_simulate(ctx, report, human);
      } else if (options.command == "unital") {
        code = cmd_unital(ctx, report, human);
      } else if (options.command == "transfer") {
        code = cmd_transfer(ctx, report, human);
      } else if (options.command == "majorize") {
        code = cmd_majorize(ctx, report, human);
      } else if (options.command == "theorem3") {
        code = cmd_theorem3(ctx, report, human);
      } else if (options.command == "monotones") {
        code = cmd_monotones(ctx, report, human);
      } else {
        throw DomainError("unknown command '" + options.command + "'");
      }
    }
  } catch (const SolverError& e) {
    err << "numerical failure: " << e.what() << " (residual " << e.residual()
        << ")\n";
    return kExitNumericalFailure;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  // Timing stays out of the JSON report so identical runs stay
  // byte-identical.
  emit(options, report, human.str(), elapsed_ms, bare, out);
  return code;
}

}  // namespace qop::cli
