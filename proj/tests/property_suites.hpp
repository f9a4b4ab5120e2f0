#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace suites {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;
};

SuiteResult ring_axioms(int cases, std::uint64_t seed);
SuiteResult leibniz(int cases, std::uint64_t seed);
SuiteResult substitution_homomorphism(int cases, std::uint64_t seed);
SuiteResult snf_postconditions(int cases, std::uint64_t seed);
SuiteResult spair_reduction(int cases, std::uint64_t seed);
/// Random corruptions of preset data; each must turn its check from pass to
/// fail.
SuiteResult fault_injection(int cases, std::uint64_t seed);

std::vector<SuiteResult> all(int cases, std::uint64_t seed);

}  // namespace suites
