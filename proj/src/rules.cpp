#include "rulesmith/rules.hpp"

#include <algorithm>
#include <map>

#include "rulesmith/oracle.hpp"

namespace rulesmith {

Rule make_rule(const ConstraintTable& t,
               const std::vector<std::pair<std::string, std::vector<std::string>>>& premise,
               const std::string& concl_var, const std::string& concl_value) {
    Rule r;
    for (const auto& [var, toks] : premise) {
        PremiseAtom a;
        a.var = t.find_var(var);
        if (a.var < 0) throw Error("unknown variable '" + var + "' in rule premise");
        if (toks.empty()) throw Error("empty payload set for '" + var + "'");
        a.values = intern_all(toks);
        Bits m = t.domains[a.var].mask_of(a.values);
        a.values = t.domains[a.var].symbols_of(m);  // canonical order, deduplicated
        r.premise.push_back(std::move(a));
    }
    std::sort(r.premise.begin(), r.premise.end(),
              [](const PremiseAtom& x, const PremiseAtom& y) { return x.var < y.var; });
    for (size_t i = 1; i < r.premise.size(); ++i)
        if (r.premise[i].var == r.premise[i - 1].var)
            throw Error("repeated premise variable in rule");
    r.concl_var = t.find_var(concl_var);
    if (r.concl_var < 0) throw Error("unknown conclusion variable '" + concl_var + "'");
    for (const auto& a : r.premise)
        if (a.var == r.concl_var) throw Error("conclusion variable occurs in the premise");
    r.concl_value = intern(concl_value);
    if (t.domains[r.concl_var].index_of(r.concl_value) < 0)
        throw Error("conclusion value '" + concl_value + "' outside domain");
    return r;
}

namespace {

bool atom_holds(const PremiseAtom& a, const Row& row, const ConstraintTable& t) {
    Symbol v = t.domains[a.var].values[row[a.var]];
    return std::find(a.values.begin(), a.values.end(), v) != a.values.end();
}

}  // namespace

bool premise_holds(const Rule& r, const Row& row, const ConstraintTable& t) {
    for (const auto& a : r.premise) {
        if (a.var < 0 || a.var >= t.arity()) throw Error("premise variable outside table");
        if (!atom_holds(a, row, t)) return false;
    }
    return true;
}

bool is_valid(const Rule& r, const ConstraintTable& t) {
    for (const Row& row : t.tuples)
        if (premise_holds(r, row, t) &&
            t.domains[r.concl_var].values[row[r.concl_var]] == r.concl_value)
            return false;
    return true;
}

bool is_feasible(const Rule& r, const ConstraintTable& t) {
    for (const Row& row : t.tuples)
        if (premise_holds(r, row, t)) return true;
    return false;
}

bool is_closed_under(const ConstraintTable& t, const Rule& r) {
    for (const Row& row : t.tuples)
        if (!premise_holds(r, row, t)) return true;  // premise not table-wide: vacuously closed
    for (const Row& row : t.tuples)
        if (t.domains[r.concl_var].values[row[r.concl_var]] == r.concl_value) return false;
    return true;
}

bool extends(const Rule& r1, const Rule& r2) {
    if (r1.concl_var != r2.concl_var || r1.concl_value != r2.concl_value) return false;
    for (const auto& a2 : r2.premise) {
        const PremiseAtom* a1 = nullptr;
        for (const auto& a : r1.premise)
            if (a.var == a2.var) {
                a1 = &a;
                break;
            }
        if (!a1) return false;
        for (Symbol s : a1->values)
            if (std::find(a2.values.begin(), a2.values.end(), s) == a2.values.end()) return false;
    }
    return true;
}

bool is_minimal(const Rule& r, const ConstraintTable& t, RuleKind kind) {
    if (!is_feasible(r, t)) return false;
    if (!is_valid(r, t)) return false;
    for (const Rule& other : brute_force_valid_rules(t, kind))
        if (!(other == r) && extends(r, other)) return false;
    return true;
}

namespace {

// Canonical sort key; payload masks are over the base declarations.
struct RuleKey {
    std::vector<std::uint64_t> k;
    bool operator<(const RuleKey& o) const { return k < o.k; }
    bool operator==(const RuleKey& o) const { return k == o.k; }
};

RuleKey rule_key(const Rule& r, const ConstraintTable& t) {
    RuleKey key;
    for (const auto& a : r.premise) {
        key.k.push_back(static_cast<std::uint64_t>(a.var));
        key.k.push_back(t.domains[a.var].mask_of(a.values));
    }
    key.k.push_back(~std::uint64_t{0});  // premise terminator: shorter premises first on ties
    key.k.push_back(static_cast<std::uint64_t>(r.concl_var));
    key.k.push_back(static_cast<std::uint64_t>(t.domains[r.concl_var].index_of(r.concl_value)));
    return key;
}

}  // namespace

void canonicalize(RuleSet& rs, const ConstraintTable& t) {
    rs.vars = t.vars;
    for (auto& r : rs.rules) {
        std::sort(r.premise.begin(), r.premise.end(),
                  [](const PremiseAtom& x, const PremiseAtom& y) { return x.var < y.var; });
        for (auto& a : r.premise) {
            Bits m = t.domains[a.var].mask_of(a.values);
            a.values = t.domains[a.var].symbols_of(m);
        }
    }
    std::vector<std::pair<RuleKey, Rule>> keyed;
    keyed.reserve(rs.rules.size());
    for (auto& r : rs.rules) keyed.emplace_back(rule_key(r, t), std::move(r));
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    rs.rules.clear();
    for (size_t i = 0; i < keyed.size(); ++i) {
        if (i > 0 && keyed[i].first == keyed[i - 1].first) continue;
        rs.rules.push_back(std::move(keyed[i].second));
    }
}

std::vector<GroupedRule> group_by_premise(const RuleSet& rs) {
    std::vector<GroupedRule> out;
    for (const Rule& r : rs.rules) {
        if (out.empty() || !(out.back().premise == r.premise)) {
            GroupedRule g;
            g.premise = r.premise;
            out.push_back(std::move(g));
        }
        out.back().conclusions.emplace_back(r.concl_var, r.concl_value);
    }
    return out;
}

std::string atom_text(const PremiseAtom& a, RuleKind kind, const std::vector<std::string>& vars) {
    std::string s = vars.at(a.var);
    if (kind == RuleKind::equality) {
        s += "=" + token(a.values.at(0));
    } else {
        s += " in {";
        for (size_t i = 0; i < a.values.size(); ++i) s += (i ? "," : "") + token(a.values[i]);
        s += "}";
    }
    return s;
}

std::string rule_text(const GroupedRule& g, RuleKind kind, const std::vector<std::string>& vars) {
    std::string s;
    if (g.premise.empty()) {
        s = "true";
    } else {
        for (size_t i = 0; i < g.premise.size(); ++i)
            s += (i ? ", " : "") + atom_text(g.premise[i], kind, vars);
    }
    s += " -> ";
    for (size_t i = 0; i < g.conclusions.size(); ++i) {
        if (i) s += ", ";
        s += vars.at(g.conclusions[i].first) + " != " + token(g.conclusions[i].second);
    }
    return s;
}

std::string to_text(const RuleSet& rs) {
    std::string out = "table " + rs.table + "\n";
    out += std::string("kind ") + (rs.kind == RuleKind::equality ? "equality" : "membership") + "\n";
    for (const auto& g : group_by_premise(rs)) out += rule_text(g, rs.kind, rs.vars) + "\n";
    return out;
}

RuleSet rebase(const RuleSet& rs, const ConstraintTable& target) {
    RuleSet out;
    out.table = target.name;
    out.kind = rs.kind;
    out.vars = target.vars;
    std::vector<int> map(rs.vars.size());
    for (size_t i = 0; i < rs.vars.size(); ++i) {
        map[i] = target.find_var(rs.vars[i]);
        if (map[i] < 0) throw Error("rebase: target lacks variable '" + rs.vars[i] + "'");
    }
    for (const Rule& r : rs.rules) {
        Rule nr = r;
        for (auto& a : nr.premise) {
            a.var = map[a.var];
            target.domains[a.var].mask_of(a.values);  // value check
        }
        nr.concl_var = map[r.concl_var];
        if (target.domains[nr.concl_var].index_of(nr.concl_value) < 0)
            throw Error("rebase: conclusion value outside target domain");
        out.rules.push_back(std::move(nr));
    }
    canonicalize(out, target);
    return out;
}

}  // namespace rulesmith
