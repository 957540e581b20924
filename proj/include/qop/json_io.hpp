#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qop/channel.hpp"
#include "qop/linalg.hpp"
#include "qop/majorize.hpp"
#include "qop/states.hpp"
#include "qop/transform.hpp"

// JSON schemas shared by the CLI and its tests. Complex scalars are
// [re, im] pairs, matrices are row-major nested arrays, states are
// amplitude arrays.
namespace qop::cli {

using Json = nlohmann::ordered_json;

struct ProblemFile {
  std::string version;
  std::string kind;
  Json payload;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
};

// Throws DomainError on malformed or unrecognized content.
ProblemFile parse_problem_file(const Json& j);
ProblemFile load_problem_file(const std::string& path);

linalg::Complex parse_complex(const Json& j);
std::vector<linalg::Complex> parse_state(const Json& j);
linalg::ComplexMatrix parse_matrix(const Json& j);
states::PureStateSet parse_state_set(const Json& j);
std::vector<double> parse_real_vector(const Json& j);

Json complex_to_json(const linalg::Complex& z);
Json state_to_json(const std::vector<linalg::Complex>& v);
Json matrix_to_json(const linalg::ComplexMatrix& m);
Json real_vector_to_json(const std::vector<double>& v);

Json certificate_to_json(const transform::Certificate& cert);
Json kraus_to_json(const channel::KrausSet& k);
Json majorization_to_json(const majorize::MajorizationVerdict& v);
Json mixing_report_to_json(const majorize::DeterministicMixingReport& report);

}  // namespace qop::cli
