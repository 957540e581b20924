#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace qop::cli {

// Exit codes: 0 feasible/holds, 1 infeasible/violated (a computed answer),
// 2 input error, 3 numerical failure.
enum ExitCode : int {
  kExitHolds = 0,
  kExitViolated = 1,
  kExitInputError = 2,
  kExitNumericalFailure = 3,
};

struct Options {
  std::string command;
  std::string input_path;
  bool json = false;
  bool max_uniform = false;  // usd only
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
  std::uint64_t trials = 100;  // selftest only
};

// Dispatches a parsed command line; reports go to `out`, diagnostics to
// `err`. Identical input, flags and seed produce byte-identical JSON.
int run(const Options& options, std::ostream& out, std::ostream& err);

}  // namespace qop::cli
