#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pbigamp {

struct ValidationResult {
  std::string suite;
  bool pass = false;
  std::string detail;
};

// Oracle-equivalence and self-consistency suites behind the `validate`
// subcommand; each is a condensed version of the corresponding test suite.
std::vector<ValidationResult> run_validation(std::uint64_t seed);

}  // namespace pbigamp
