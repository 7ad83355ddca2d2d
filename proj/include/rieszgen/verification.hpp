#pragma once

// The acceptance suite and per-instance consistency checks. Shared by the
// acceptance test binary and `rieszgen verify`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rieszgen/conditional.hpp"
#include "rieszgen/distributions.hpp"

namespace rieszgen::verify {

inline constexpr int kCriterionCount = 10;
// Wall-clock budget for a complete acceptance run, in seconds.
inline constexpr double kTotalTimeLimit = 60.0;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  std::optional<double> time_limit;
};

struct Options {
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

// Runs criterion `id` (1-based). Exceptions are caught and reported as
// failures.
CriterionResult run_criterion(int id, const Options& options = {});
// All criteria in order; the last one also enforces kTotalTimeLimit on the
// whole run.
std::vector<CriterionResult> run_acceptance(const Options& options = {});

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
};

// Lattice-side quantities of one instance against the enumeration oracle.
std::vector<CheckResult> verify_instance(const ConditionalTriple& triple, const NaturalElement& x, double tol);

}  // namespace rieszgen::verify
