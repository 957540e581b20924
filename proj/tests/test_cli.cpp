#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "qop/cli.hpp"
#include "qop/json_io.hpp"

using namespace qop;
using cli::Json;

namespace {

struct TempFile {
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "qop_test_input_" + std::to_string(counter++) + ".json";
    std::ofstream f(path);
    f << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
  std::string path;
};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(cli::Options options) {
  std::ostringstream out, err;
  const int code = cli::run(options, out, err);
  return RunResult{code, out.str(), err.str()};
}

cli::Options options_for(const std::string& command, const std::string& path,
                         bool json = true) {
  cli::Options o;
  o.command = command;
  o.input_path = path;
  o.json = json;
  return o;
}

// gamma1 = 0.5 -> gamma2 = 0.9, the feasible deterministic example.
std::string feasible_det_file() {
  return R"({
    "version": "1",
    "kind": "deterministic",
    "payload": {
      "initial": [[[1, 0], [0, 0]], [[0.5, 0], [0.8660254037844386, 0]]],
      "final":   [[[1, 0], [0, 0]], [[0.9, 0], [0.4358898943540674, 0]]]
    }
  })";
}

std::string infeasible_det_file() {
  return R"({
    "version": "1",
    "kind": "deterministic",
    "payload": {
      "initial": [[[1, 0], [0, 0]], [[0.9, 0], [0.4358898943540674, 0]]],
      "final":   [[[1, 0], [0, 0]], [[0.5, 0], [0.8660254037844386, 0]]]
    }
  })";
}

std::string usd_pair_file() {
  return R"({
    "version": "1",
    "kind": "usd",
    "payload": {
      "initial": [[[1, 0], [0, 0]], [[0.5, 0], [0.8660254037844386, 0]]],
      "probabilities": [0.5, 0.5]
    }
  })";
}

}  // namespace

TEST_CASE("det command: exit codes follow the verdict") {
  TempFile feasible(feasible_det_file());
  const RunResult good = run(options_for("det", feasible.path));
  CHECK(good.code == cli::kExitHolds);
  const Json report = Json::parse(good.out);
  CHECK(report["certificate"]["feasible"].get<bool>());
  // The certificate includes the candidate matrix, 5/9 off-diagonal.
  CHECK(report["certificate"]["pi"][0][1][0].get<double>() ==
        doctest::Approx(0.5 / 0.9).epsilon(1e-9));

  TempFile infeasible(infeasible_det_file());
  const RunResult bad = run(options_for("det", infeasible.path));
  CHECK(bad.code == cli::kExitViolated);
  const Json bad_report = Json::parse(bad.out);
  CHECK_FALSE(bad_report["certificate"]["feasible"].get<bool>());
  CHECK(bad_report["certificate"]["conditions"]["pi_positive"]["min_eigenvalue"]
            .get<double>() == doctest::Approx(-0.8).epsilon(1e-9));
}

TEST_CASE("feasible command finds and embeds a certificate") {
  TempFile f(feasible_det_file());
  const RunResult r = run(options_for("feasible", f.path));
  CHECK(r.code == cli::kExitHolds);
  const Json report = Json::parse(r.out);
  CHECK(report["feasible"].get<bool>());
  CHECK(report.contains("certificate"));

  TempFile inf(infeasible_det_file());
  const RunResult r2 = run(options_for("feasible", inf.path));
  CHECK(r2.code == cli::kExitViolated);
  CHECK(Json::parse(r2.out)["proven_infeasible"].get<bool>());

  // Probabilistic kind: steering the overlap-1/2 pair onto an orthonormal
  // set at the boundary probabilities.
  TempFile prob_file(R"({
    "version": "1",
    "kind": "transform",
    "payload": {
      "initial": [[[1, 0], [0, 0]], [[0.5, 0], [0.8660254037844386, 0]]],
      "final":   [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
      "probabilities": [0.5, 0.5]
    }
  })");
  const RunResult r3 = run(options_for("feasible", prob_file.path));
  CHECK(r3.code == cli::kExitHolds);
  CHECK(Json::parse(r3.out)["certificate"]["feasible"].get<bool>());
}

TEST_CASE("usd command") {
  TempFile f(usd_pair_file());
  SUBCASE("boundary pair is feasible") {
    const RunResult r = run(options_for("usd", f.path));
    CHECK(r.code == cli::kExitHolds);
  }
  SUBCASE("--max-uniform prints the bare number in human mode") {
    cli::Options o = options_for("usd", f.path, /*json=*/false);
    o.max_uniform = true;
    const RunResult r = run(o);
    CHECK(r.code == cli::kExitHolds);
    CHECK(r.out.substr(0, 3) == "0.5");
  }
  SUBCASE("--max-uniform in JSON mode") {
    cli::Options o = options_for("usd", f.path);
    o.max_uniform = true;
    const RunResult r = run(o);
    const Json report = Json::parse(r.out);
    CHECK(report["max_uniform_probability"].get<double>() ==
          doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("verify-pi command checks a provided candidate") {
  TempFile f(R"({
    "version": "1",
    "kind": "transform",
    "payload": {
      "initial": [[[1, 0], [0, 0]], [[0.5, 0], [0.8660254037844386, 0]]],
      "final":   [[[1, 0], [0, 0]], [[0.9, 0], [0.4358898943540674, 0]]],
      "probabilities": [1.0, 1.0],
      "pi": [[[1, 0], [0.5555555555555556, 0]], [[0.5555555555555556, 0], [1, 0]]]
    }
  })");
  const RunResult r = run(options_for("verify-pi", f.path));
  CHECK(r.code == cli::kExitHolds);
  const Json report = Json::parse(r.out);
  CHECK(report["certificate"]["feasible"].get<bool>());
  CHECK(report["certificate"]["sufficiency_applies"].get<bool>());

  TempFile missing_pi(R"({
    "version": "1",
    "kind": "transform",
    "payload": {
      "initial": [[[1, 0], [0, 0]]],
      "final": [[[1, 0], [0, 0]]],
      "probabilities": [1.0]
    }
  })");
  const RunResult r2 = run(options_for("verify-pi", missing_pi.path));
  CHECK(r2.code == cli::kExitInputError);
}

TEST_CASE("kraus command builds a trace-preserving pair") {
  TempFile f(feasible_det_file());
  const RunResult r = run(options_for("kraus", f.path));
  CHECK(r.code == cli::kExitHolds);
  const Json report = Json::parse(r.out);
  CHECK(report["feasible"].get<bool>());
  CHECK(report["kraus"]["completeness_defect"].get<double>() < 1e-9);
  // Schema round trip: emitted operators parse back as matrices.
  for (const Json& op : report["kraus"]["operators"]) {
    CHECK_NOTHROW(cli::parse_matrix(op));
  }
}

TEST_CASE("majorize command") {
  TempFile f(R"({
    "version": "1",
    "kind": "majorize",
    "payload": {"lambda": [0.5, 0.3, 0.2], "sigma": [0.4, 0.35, 0.25]}
  })");
  const RunResult r = run(options_for("majorize", f.path));
  CHECK(r.code == cli::kExitHolds);
  const Json report = Json::parse(r.out);
  CHECK(report["majorizes"]["holds"].get<bool>());
  CHECK(report.contains("witness"));

  TempFile violated(R"({
    "version": "1",
    "kind": "majorize",
    "payload": {"lambda": [0.5, 0.5], "sigma": [0.6, 0.4]}
  })");
  const RunResult r2 = run(options_for("majorize", violated.path));
  CHECK(r2.code == cli::kExitViolated);
  CHECK(Json::parse(r2.out)["majorizes"]["violated_prefix"].get<int>() == 1);
}

TEST_CASE("theorem3 command") {
  TempFile f(R"({
    "version": "1",
    "kind": "theorem3",
    "payload": {
      "initial": [[[1, 0], [0, 0]], [[0.5, 0], [0.8660254037844386, 0]]],
      "final":   [[[1, 0], [0, 0]], [[0.9, 0], [0.4358898943540674, 0]]],
      "priors": [0.5, 0.5]
    }
  })");
  const RunResult r = run(options_for("theorem3", f.path));
  CHECK(r.code == cli::kExitHolds);
  const Json report = Json::parse(r.out);
  CHECK(report["report"]["holds"].get<bool>());
  CHECK(report["report"]["initial_spectrum"][0].get<double>() ==
        doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("simulate and unital commands") {
  // Dephasing mixture of 1 and Z.
  const std::string channel_file = R"({
    "version": "1",
    "kind": "channel",
    "payload": {
      "operators": [
        [[[0.7071067811865476, 0], [0, 0]], [[0, 0], [0.7071067811865476, 0]]],
        [[[0.7071067811865476, 0], [0, 0]], [[0, 0], [-0.7071067811865476, 0]]]
      ],
      "labels": ["u0", "u1"],
      "rho": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]
    }
  })";
  TempFile f(channel_file);

  const RunResult sim = run(options_for("simulate", f.path));
  CHECK(sim.code == cli::kExitHolds);
  const Json sim_report = Json::parse(sim.out);
  CHECK(sim_report["trace_preserving"]["pass"].get<bool>());
  CHECK(sim_report["output"]["entropy_bits"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));

  const RunResult unital = run(options_for("unital", f.path));
  CHECK(unital.code == cli::kExitHolds);
  CHECK(Json::parse(unital.out)["unital"]["pass"].get<bool>());
}

TEST_CASE("transfer command emits stochastic sums") {
  const std::string channel_file = R"({
    "version": "1",
    "kind": "channel",
    "payload": {
      "operators": [
        [[[0.7071067811865476, 0], [0, 0]], [[0, 0], [0.7071067811865476, 0]]],
        [[[0.7071067811865476, 0], [0, 0]], [[0, 0], [-0.7071067811865476, 0]]]
      ],
      "rho": [[[0.7, 0], [0.2, 0]], [[0.2, 0], [0.3, 0]]]
    }
  })";
  TempFile f(channel_file);
  const RunResult r = run(options_for("transfer", f.path));
  CHECK(r.code == cli::kExitHolds);
  const Json report = Json::parse(r.out);
  for (const Json& s : report["transfer"]["row_sums"]) {
    CHECK(s.get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (const Json& s : report["transfer"]["col_sums"]) {
    CHECK(s.get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("monotones command") {
  TempFile f(R"({
    "version": "1",
    "kind": "monotones",
    "payload": {
      "states": [[[1, 0], [0, 0]], [[0.5, 0], [0.8660254037844386, 0]]],
      "priors": [0.5, 0.5],
      "k": 1
    }
  })");
  const RunResult r = run(options_for("monotones", f.path));
  CHECK(r.code == cli::kExitHolds);
  const Json report = Json::parse(r.out);
  CHECK(report["mu_k"].get<double>() == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(report["partial_sums"][1].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("input errors exit with code 2") {
  SUBCASE("missing file") {
    const RunResult r = run(options_for("det", "does_not_exist.json"));
    CHECK(r.code == cli::kExitInputError);
    CHECK(r.err.find("input error") != std::string::npos);
  }
  SUBCASE("malformed JSON reports the parse location") {
    TempFile f("{\"version\": \"1\", ");
    const RunResult r = run(options_for("det", f.path));
    CHECK(r.code == cli::kExitInputError);
    CHECK(r.err.find("parse error") != std::string::npos);
  }
  SUBCASE("wrong kind for the command") {
    TempFile f(usd_pair_file());
    const RunResult r = run(options_for("det", f.path));
    CHECK(r.code == cli::kExitInputError);
  }
  SUBCASE("unknown version") {
    TempFile f(R"({"version": "9", "kind": "usd", "payload": {}})");
    const RunResult r = run(options_for("usd", f.path));
    CHECK(r.code == cli::kExitInputError);
  }
  SUBCASE("selftest with zero trials") {
    cli::Options o;
    o.command = "selftest";
    o.trials = 0;
    const RunResult r = run(o);
    CHECK(r.code == cli::kExitInputError);
  }
}

TEST_CASE("JSON reports are byte-identical across runs") {
  TempFile f(feasible_det_file());
  const RunResult a = run(options_for("kraus", f.path));
  const RunResult b = run(options_for("kraus", f.path));
  CHECK(a.out == b.out);

  cli::Options self;
  self.command = "selftest";
  self.json = true;
  self.trials = 3;
  self.seed = 12345;
  const RunResult s1 = run(self);
  const RunResult s2 = run(self);
  CHECK(s1.code == cli::kExitHolds);
  CHECK(s1.out == s2.out);
}

TEST_CASE("--out writes the report to a file") {
  TempFile f(feasible_det_file());
  cli::Options o = options_for("det", f.path);
  o.out_path = "qop_test_report.json";
  const RunResult r = run(o);
  CHECK(r.code == cli::kExitHolds);
  CHECK(r.out.empty());
  std::ifstream written(*o.out_path);
  REQUIRE(written.good());
  Json report;
  written >> report;
  CHECK(report["certificate"]["feasible"].get<bool>());
  std::remove(o.out_path->c_str());
}

TEST_CASE("selftest runs its suites quickly at low trial counts") {
  cli::Options o;
  o.command = "selftest";
  o.json = true;
  o.trials = 2;
  o.seed = 99;
  const RunResult r = run(o);
  CHECK(r.code == cli::kExitHolds);
  const Json report = Json::parse(r.out);
  CHECK(report["all_passed"].get<bool>());
  CHECK(report["properties"].size() >= 20);
}
