#pragma once

#include "mms/instance.hpp"

namespace mms {

struct OrderedReduction {
  Instance ordered_instance;
  Instance original_instance;
};

/// Rewrites every agent's values so that, within each category, position j
/// carries that agent's j-th largest value. Item ids, categories and quotas
/// are unchanged.
OrderedReduction to_ordered(const Instance& inst);

/// Turns an allocation of the ordered instance into one of the original
/// instance with the same per-category counts and no smaller own values.
/// Walking each category in position order, the holder of position j takes
/// its most valuable unassigned item of that category (lowest id on ties).
Allocation lift_allocation(const OrderedReduction& reduction, const Allocation& ordered_alloc);

}  // namespace mms
