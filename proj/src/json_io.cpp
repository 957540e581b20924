#include "qop/json_io.hpp"

#include <fstream>
#include <set>

#include "qop/error.hpp"

namespace qop::cli {

using linalg::Complex;
using linalg::ComplexMatrix;

namespace {

const std::set<std::string> kKnownKinds = {
    "transform", "usd", "deterministic", "channel",
    "majorize",  "theorem3", "monotones"};

}  // namespace

ProblemFile parse_problem_file(const Json& j) {
  if (!j.is_object()) throw DomainError("problem file must be a JSON object");
  if (!j.contains("version") || !j["version"].is_string()) {
    throw DomainError("problem file needs a string 'version'");
  }
  ProblemFile f;
  f.version = j["version"].get<std::string>();
  if (f.version != "1") {
    throw DomainError("unrecognized problem file version '" + f.version + "'");
  }
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw DomainError("problem file needs a string 'kind'");
  }
  f.kind = j["kind"].get<std::string>();
  if (kKnownKinds.find(f.kind) == kKnownKinds.end()) {
    throw DomainError("unrecognized problem kind '" + f.kind + "'");
  }
  if (!j.contains("payload") || !j["payload"].is_object()) {
    throw DomainError("problem file needs an object 'payload'");
  }
  f.payload = j["payload"];
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number()) throw DomainError("'tolerance' must be a number");
    f.tolerance = j["tolerance"].get<double>();
    if (*f.tolerance < 0.0) throw DomainError("'tolerance' must be nonnegative");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw DomainError("'seed' must be a nonnegative integer");
    }
    f.seed = j["seed"].get<std::uint64_t>();
  }
  return f;
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open input file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError("JSON parse error in '" + path + "': " + e.what());
  }
  return parse_problem_file(j);
}

Complex parse_complex(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw DomainError("complex scalar must be a [re, im] pair");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

std::vector<Complex> parse_state(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw DomainError("state must be a nonempty array of [re, im] pairs");
  }
  std::vector<Complex> v;
  v.reserve(j.size());
  for (const Json& e : j) v.push_back(parse_complex(e));
  return v;
}

ComplexMatrix parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw DomainError("matrix must be a nonempty array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (const Json& row : j) {
    if (!row.is_array() || row.size() != cols) {
      throw DomainError("matrix rows must all have the same length");
    }
    for (const Json& e : row) entries.push_back(parse_complex(e));
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

states::PureStateSet parse_state_set(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw DomainError("state set must be a nonempty array of states");
  }
  std::vector<std::vector<Complex>> states;
  states.reserve(j.size());
  for (const Json& s : j) states.push_back(parse_state(s));
  const std::size_t dim = states.front().size();
  return states::PureStateSet(dim, std::move(states));
}

std::vector<double> parse_real_vector(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw DomainError("expected a nonempty array of numbers");
  }
  std::vector<double> v;
  v.reserve(j.size());
  for (const Json& e : j) {
    if (!e.is_number()) throw DomainError("expected a number");
    v.push_back(e.get<double>());
  }
  return v;
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json state_to_json(const std::vector<Complex>& v) {
  Json j = Json::array();
  for (const Complex& z : v) j.push_back(complex_to_json(z));
  return j;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json j = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(i, c)));
    j.push_back(std::move(row));
  }
  return j;
}

Json real_vector_to_json(const std::vector<double>& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

Json certificate_to_json(const transform::Certificate& cert) {
  Json j;
  j["feasible"] = cert.feasible;
  j["sufficiency_applies"] = cert.sufficiency_applies;
  j["tolerance"] = cert.tol;
  j["conditions"] = Json{
      {"pi_positive",
       {{"pass", cert.pi_positive.pass}, {"min_eigenvalue", cert.pi_positive.witness}}},
      {"diagonal_matches_p",
       {{"pass", cert.diagonal_matches.pass},
        {"max_deviation", cert.diagonal_matches.witness}}},
      {"residual_positive",
       {{"pass", cert.residual_positive.pass},
        {"min_eigenvalue", cert.residual_positive.witness}}}};
  if (cert.zero_overlap_conflict) {
    j["zero_overlap_conflict"] =
        Json::array({(*cert.zero_overlap_conflict)[0], (*cert.zero_overlap_conflict)[1]});
  }
  j["pi"] = matrix_to_json(cert.pi.matrix());
  return j;
}

Json kraus_to_json(const channel::KrausSet& k) {
  Json ops = Json::array();
  Json labels = Json::array();
  for (std::size_t i = 0; i < k.size(); ++i) {
    ops.push_back(matrix_to_json(k.op(i)));
    labels.push_back(k.label(i));
  }
  Json j;
  j["operators"] = std::move(ops);
  j["labels"] = std::move(labels);
  j["completeness_defect"] = k.completeness_defect();
  return j;
}

Json majorization_to_json(const majorize::MajorizationVerdict& v) {
  Json j;
  j["holds"] = v.holds;
  j["totals_match"] = v.totals_match;
  j["total_gap"] = v.total_gap;
  if (v.violated_prefix) j["violated_prefix"] = *v.violated_prefix;
  return j;
}

Json mixing_report_to_json(const majorize::DeterministicMixingReport& report) {
  Json j;
  j["holds"] = report.holds;
  j["hypothesis_met"] = report.hypothesis_met;
  if (report.deterministic_certificate) {
    j["deterministic_certificate"] =
        certificate_to_json(*report.deterministic_certificate);
  }
  if (!report.hypothesis_met) return j;
  j["majorization"] = majorization_to_json(report.majorization);
  j["initial_spectrum"] = real_vector_to_json(report.initial_spectrum);
  j["final_spectrum"] = real_vector_to_json(report.final_spectrum);
  j["gram_identity_residual"] = report.gram_identity_residual;
  j["initial_spectrum_gap"] = report.initial_spectrum_gap;
  j["final_spectrum_gap"] = report.final_spectrum_gap;
  return j;
}

}  // namespace qop::cli
