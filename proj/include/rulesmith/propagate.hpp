#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rulesmith/csp.hpp"
#include "rulesmith/rules.hpp"

namespace rulesmith {

/// Rule sets compiled against one CSP's shape: per rule, premise tests over
/// the bound variables' bit layouts plus the conclusion bit.
struct Program {
    struct PAtom {
        int var;       // CSP variable index
        Bits allowed;  // payload translated into the variable's layout
        bool exact;    // equality atom: domain must equal `allowed` (a singleton)
    };
    struct PRule {
        std::vector<PAtom> premise;
        int concl_var = -1;
        Bits concl_bit = 0;  // 0: conclusion value absent, never relevant
        bool dead = false;   // an equality premise value is unrepresentable
        int instance = -1;
        int rule_index = -1;  // index in the source RuleSet
    };
    std::vector<PRule> rules;
    std::vector<std::vector<int>> watchers;  // var -> rules watching it
    std::vector<std::string> tables;         // instance -> base table name
    int nvars = 0;
};

/// per_instance[i] supplies the rules fired through instance i (nullptr: none).
Program make_program(const Csp& csp, const std::vector<const RuleSet*>& per_instance);

/// Program from generated minimal rules of the kind, one set per distinct base.
Program make_generated_program(const Csp& csp, RuleKind kind);

/// Program from one rule set attached to every instance whose base name matches.
Program make_file_program(const Csp& csp, const RuleSet& rs);

/// Generated minimal rules, cached per table identity.
const RuleSet& cached_rules(const TablePtr& table, RuleKind kind);

struct TraceStep {
    int rule = -1;  // program rule id
    int var = -1;
    Symbol value = 0;
};

struct Trace {
    std::vector<TraceStep> steps;
};

std::string to_text(const Trace& tr, const Program& p, const Csp& csp);

bool fires(const Csp& csp, const Program& p, int rule);
bool is_relevant(const Csp& csp, const Program& p, int rule);

/// Removes the conclusion value; identical CSP when the value is absent.
/// Throws unless the rule fires.
Csp apply_rule(const Csp& csp, const Program& p, int rule);

/// Runs relevant applications to closure. The result is order-independent;
/// the trace records the order actually used.
std::pair<Csp, Trace> propagate(const Csp& csp, const Program& p);

/// Closure under a randomized application order (for confluence checks).
std::pair<Csp, Trace> propagate_shuffled(const Csp& csp, const Program& p, std::uint64_t seed);

struct ConsistencyReport {
    bool failed = false;  // some current domain is empty; consistency not claimed
    bool consistent = false;
};

ConsistencyReport check_rule_consistent(const Csp& csp);
ConsistencyReport check_membership_rule_consistent(const Csp& csp);
ConsistencyReport check_arc_consistent(const Csp& csp);

/// Deletes unsupported values to a fixpoint. Naive by design; test oracle.
Csp gac_oracle(const Csp& csp);

}  // namespace rulesmith
