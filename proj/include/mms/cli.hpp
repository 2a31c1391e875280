#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mms/instance.hpp"

namespace mms::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kValidationError = 2,
  kGuaranteeFailure = 3,
  kGuardExceeded = 4,
};

struct SolveOutcome {
  /// Algorithm actually run (auto resolved).
  std::string algorithm;
  Rational alpha;
  Allocation allocation;
  std::vector<std::optional<Rational>> mu_hat;
  int reductions = 0;
};

/// selector: auto, single-goods, single-chores, multi-goods, multi-chores,
/// identical-dp, fptas, almost-identical, bivalued. Orders the instance where
/// the algorithm needs it and lifts the result back.
SolveOutcome solve_instance(const Instance& inst, const std::string& selector, const std::optional<Rational>& alpha,
                            const Rational& eps, bool check_invariants);

/// Entry point of the `mms` tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mms::cli
