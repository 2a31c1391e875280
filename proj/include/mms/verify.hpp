#pragma once

#include <vector>

#include "mms/instance.hpp"

namespace mms {

struct AgentMargin {
  int agent = 0;
  Rational value;
  Rational mu;
  /// value - alpha * mu
  Rational margin;
};

struct VerifyReport {
  bool ok = false;
  std::vector<AgentMargin> agents;
  Rational min_margin;
};

/// Checks v_i(A_i) >= alpha * mu_i for every agent with exact arithmetic.
/// Throws PreconditionError if the allocation is not a feasible partition or
/// mms_values has the wrong length.
VerifyReport verify_alpha_mms(const Instance& inst, const Allocation& alloc, const Rational& alpha,
                              const std::vector<Rational>& mms_values);

}  // namespace mms
