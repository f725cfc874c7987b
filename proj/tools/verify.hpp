#pragma once

// Cross-engine property suite behind `hyperdet verify`. Each property runs a
// seeded batch of random inputs; the first failing input is kept as a
// counterexample in TensorDocument form.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hyperdet::cli {

struct VerifyConfig {
  std::uint64_t seed = 1;
  std::vector<std::pair<std::size_t, std::size_t>> sizes{{2, 2}, {2, 3}, {2, 4}, {3, 2},
                                                         {3, 3}, {2, 6}};
  std::size_t trials = 10;
  // Test hook: perturbs the Levi-Civita engine so the suite must fail.
  bool inject_fault = false;
};

struct PropertyOutcome {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string detail;
  std::string counterexample;  // serialized TensorDocument, empty when passed
};

std::vector<PropertyOutcome> run_verify(const VerifyConfig& config);

// "2x4,3x2" -> {(2,4), (3,2)}; ParseError on malformed input.
std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string& text);

// One line per property; returns true when all passed.
bool print_verify(std::ostream& out, const std::vector<PropertyOutcome>& outcomes);

}  // namespace hyperdet::cli
