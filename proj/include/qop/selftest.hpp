#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qop::selftest {

struct PropertyResult {
  std::string module;
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::optional<std::uint64_t> first_failure_seed;
  std::string first_failure_detail;
  bool informational = false;  // probes that record but never fail
  std::string note;
};

// Runs every randomized property suite for the given number of trials.
// Per-trial seeds derive deterministically from the root seed, so any
// failure replays from the reported seed alone.
std::vector<PropertyResult> run(std::uint64_t seed, std::size_t trials);

bool all_passed(const std::vector<PropertyResult>& results);

}  // namespace qop::selftest
