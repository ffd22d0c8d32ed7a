#pragma once

#include <chrono>
#include <optional>

#include "rulesmith/rules.hpp"

namespace rulesmith {

struct GenConfig {
    RuleKind kind = RuleKind::equality;
    std::optional<int> max_premise;  // cap on premise variable count
    int threads = 0;                 // 0: RULESMITH_THREADS or hardware default
    std::optional<std::chrono::milliseconds> budget;  // wall-clock cap
};

struct StageStats {
    int premise_size = 0;
    long long candidates = 0;
    long long kept = 0;
    double ms = 0;
};

struct GenStats {
    long long candidates = 0;
    long long kept = 0;  // ungrouped
    double ms = 0;
    std::vector<StageStats> stages;
};

struct GenResult {
    RuleSet rules;
    GenStats stats;
    bool timed_out = false;  // budget hit; `rules` is empty in that case
};

GenResult run_generation(const ConstraintTable& t, const GenConfig& cfg);

/// Exactly the minimal valid rules of the kind, staged by premise size with
/// extension pruning. Convenience fronts for run_generation.
RuleSet generate_equality_rules(const ConstraintTable& t, std::optional<int> max_premise = {});
RuleSet generate_membership_rules(const ConstraintTable& t, std::optional<int> max_premise = {});

/// {x_i = a -> x_j != a | i != j, a in domain} over a shared domain.
RuleSet all_different_rules(const std::vector<std::string>& vars,
                            const std::vector<Symbol>& domain);

/// The injective-tuples table the all_different rules describe.
ConstraintTable all_different_table(const std::vector<std::string>& vars,
                                    const std::vector<Symbol>& domain);

struct Assignment {
    std::vector<int> vars;
    std::vector<Symbol> values;
};

struct WeakAssignment {
    std::vector<int> vars;
    std::vector<std::vector<Symbol>> sets;
};

/// Distinct projections of tuples onto x, ascending by value indices.
std::vector<Assignment> enumerate_assignments(const ConstraintTable& t, const std::vector<int>& x);

/// Tuples of non-empty column subsets sharing a tuple, in decreasing order:
/// descending total cardinality, ties by ascending mask sequence. Pointwise
/// supersets always precede their subsets.
std::vector<WeakAssignment> enumerate_weak_assignments(const ConstraintTable& t,
                                                       const std::vector<int>& x);

int default_thread_count();

}  // namespace rulesmith
