#include "mms/verify.hpp"

#include "mms/errors.hpp"

namespace mms {

VerifyReport verify_alpha_mms(const Instance& inst, const Allocation& alloc, const Rational& alpha,
                              const std::vector<Rational>& mms_values) {
  if (static_cast<int>(mms_values.size()) != inst.n_agents) {
    throw PreconditionError("expected one MMS value per agent");
  }
  if (!is_feasible_allocation(inst, alloc)) throw PreconditionError("allocation is infeasible");
  VerifyReport report;
  report.ok = true;
  for (int i = 0; i < inst.n_agents; ++i) {
    AgentMargin a;
    a.agent = i;
    a.value = bundle_value(inst, i, alloc.bundles[i]);
    a.mu = mms_values[i];
    a.margin = a.value - alpha * a.mu;
    if (a.margin.sign() < 0) report.ok = false;
    if (i == 0 || a.margin < report.min_margin) report.min_margin = a.margin;
    report.agents.push_back(std::move(a));
  }
  return report;
}

}  // namespace mms
