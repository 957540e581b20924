#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qop/cli.hpp"

namespace {

void add_common_flags(CLI::App* cmd, qop::cli::Options& options) {
  cmd->add_flag("--json", options.json, "emit the report as JSON");
  cmd->add_option("--tol", [&options](const CLI::results_t& res) {
      try {
        options.tol = std::stod(res[0]);
      } catch (const std::exception&) {
        return false;
      }
      return true;
    }, "override the default tolerance")->expected(1);
  cmd->add_option("--seed", [&options](const CLI::results_t& res) {
      if (res[0].empty() || res[0][0] == '-') return false;
      try {
        options.seed = std::stoull(res[0]);
      } catch (const std::exception&) {
        return false;
      }
      return true;
    }, "seed for randomized constructions")->expected(1);
  cmd->add_option("--out", [&options](const CLI::results_t& res) {
      options.out_path = res[0];
      return true;
    }, "write the report to a file instead of stdout")->expected(1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasibility, construction and mixing analysis for pure-state "
               "transformations and quantum channels"};
  app.require_subcommand(1);

  qop::cli::Options options;

  struct Spec {
    const char* name;
    const char* help;
    bool takes_input;
  };
  const Spec specs[] = {
      {"feasible", "search for a transformation certificate", true},
      {"verify-pi", "check a provided certificate candidate", true},
      {"kraus", "construct the two-outcome realization", true},
      {"usd", "unambiguous-discrimination feasibility", true},
      {"det", "deterministic transformation condition", true},
      {"simulate", "apply a channel and report outcomes", true},
      {"unital", "trace-preservation and unitality verdicts", true},
      {"transfer", "eigenbasis transfer matrix of a channel", true},
      {"majorize", "majorization verdict with witness", true},
      {"theorem3", "deterministic ensemble mixing pipeline", true},
      {"monotones", "partial-sum distinguishability monotones", true},
      {"selftest", "run the randomized property suites", false},
  };

  for (const Spec& spec : specs) {
    CLI::App* cmd = app.add_subcommand(spec.name, spec.help);
    if (spec.takes_input) {
      cmd->add_option("input", [&options](const CLI::results_t& res) {
          options.input_path = res[0];
          return true;
        }, "problem file (JSON)")->required()->expected(1);
    }
    add_common_flags(cmd, options);
    if (std::string(spec.name) == "usd") {
      cmd->add_flag("--max-uniform", options.max_uniform,
                    "report the largest uniform success probability");
    }
    if (std::string(spec.name) == "selftest") {
      cmd->add_option("--trials", options.trials, "trials per property");
    }
    cmd->callback([&options, name = std::string(spec.name)] {
      options.command = name;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    // CLI11 returns 0 for --help; anything else is an input error.
    return rc == 0 ? 0 : qop::cli::kExitInputError;
  }

  return qop::cli::run(options, std::cout, std::cerr);
}
