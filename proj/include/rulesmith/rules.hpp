#pragma once

#include <string>
#include <vector>

#include "rulesmith/table.hpp"

namespace rulesmith {

enum class RuleKind { equality, membership };

/// Premise atom x in S over a base-table role. Equality rules keep singleton
/// payloads; the kind tag on the owning set records how they fire.
struct PremiseAtom {
    int var = -1;                // role index into the base table
    std::vector<Symbol> values;  // non-empty, canonical (declaration) order

    bool operator==(const PremiseAtom&) const = default;
};

/// Ungrouped rule: premise atoms on pairwise distinct roles, one conclusion.
struct Rule {
    std::vector<PremiseAtom> premise;  // sorted by role
    int concl_var = -1;
    Symbol concl_value = 0;

    bool operator==(const Rule&) const = default;
};

struct GroupedRule {
    std::vector<PremiseAtom> premise;
    std::vector<std::pair<int, Symbol>> conclusions;  // (role, value), canonical order
};

struct RuleSet {
    std::string table;  // base table name
    RuleKind kind = RuleKind::equality;
    std::vector<std::string> vars;  // base role names, for rendering
    std::vector<Rule> rules;        // canonical order, duplicate-free

    bool operator==(const RuleSet&) const = default;
};

/// Convenience constructor from names and tokens; validates against `t`.
Rule make_rule(const ConstraintTable& t,
               const std::vector<std::pair<std::string, std::vector<std::string>>>& premise,
               const std::string& concl_var, const std::string& concl_value);

bool premise_holds(const Rule& r, const Row& row, const ConstraintTable& t);
bool is_valid(const Rule& r, const ConstraintTable& t);
bool is_feasible(const Rule& r, const ConstraintTable& t);

/// Closure of a constraint under a rule: if every tuple satisfies the
/// premise then every tuple satisfies the conclusion.
bool is_closed_under(const ConstraintTable& t, const Rule& r);

/// r1 extends r2: same conclusion, r2's premise roles are a subsequence of
/// r1's and r1's payload is pointwise contained in r2's on shared roles.
/// For singleton payloads this is exactly assignment-subsequence.
bool extends(const Rule& r1, const Rule& r2);

/// Oracle-path minimality: feasible and not a proper extension of any valid
/// rule of the given kind (payloads ranging over column subsets).
bool is_minimal(const Rule& r, const ConstraintTable& t, RuleKind kind);

/// Sorts atoms, payload values and rules into canonical order and deduplicates.
void canonicalize(RuleSet& rs, const ConstraintTable& t);

/// Merges rules with identical premises; input must be canonical.
std::vector<GroupedRule> group_by_premise(const RuleSet& rs);

std::string atom_text(const PremiseAtom& a, RuleKind kind, const std::vector<std::string>& vars);
std::string rule_text(const GroupedRule& g, RuleKind kind, const std::vector<std::string>& vars);

/// Canonical text form: `table`/`kind` header lines then one grouped rule per line.
std::string to_text(const RuleSet& rs);

/// Re-targets a rule set onto another table by matching role names.
RuleSet rebase(const RuleSet& rs, const ConstraintTable& target);

}  // namespace rulesmith
