#pragma once

#include <optional>

#include "rulesmith/rules.hpp"

namespace rulesmith {

/// All feasible valid rules of one kind, by direct enumeration and per-tuple
/// checks. Equality premises range over projections of tuples; membership
/// premises over tuples of column subsets that share a tuple. Kept separate
/// from the staged generator on purpose: this is its oracle.
std::vector<Rule> brute_force_valid_rules(const ConstraintTable& t, RuleKind kind,
                                          std::optional<int> max_premise = {});

/// The minimal elements of brute_force_valid_rules under `extends`.
RuleSet brute_force_rules(const ConstraintTable& t, RuleKind kind,
                          std::optional<int> max_premise = {});

}  // namespace rulesmith
