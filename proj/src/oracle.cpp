#include "rulesmith/oracle.hpp"

#include <algorithm>
#include <set>

namespace rulesmith {

namespace {

void subsets_of(const std::vector<int>& all, int k, int from, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int i = from; i < static_cast<int>(all.size()); ++i) {
        cur.push_back(all[i]);
        subsets_of(all, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> var_subsets(int n, int k) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    subsets_of(all, k, 0, cur, out);
    return out;
}

void emit_conclusions(const ConstraintTable& t, const std::vector<PremiseAtom>& premise,
                      Bits used_vars, std::vector<Rule>& out) {
    Rule r;
    r.premise = premise;
    for (int y = 0; y < t.arity(); ++y) {
        if (has_bit(used_vars, y)) continue;
        r.concl_var = y;
        for (Symbol d : t.domains[y].values) {
            r.concl_value = d;
            if (is_valid(r, t)) out.push_back(r);
        }
    }
}

}  // namespace

std::vector<Rule> brute_force_valid_rules(const ConstraintTable& t, RuleKind kind,
                                          std::optional<int> max_premise) {
    const int n = t.arity();
    const int cap = max_premise ? std::min(*max_premise, n - 1) : n - 1;
    std::vector<Rule> out;

    for (int k = 0; k <= cap; ++k) {
        for (const auto& xs : var_subsets(n, k)) {
            Bits used = 0;
            for (int x : xs) used |= bit(x);
            if (kind == RuleKind::equality) {
                // distinct projections of tuples onto xs
                std::set<Row> seen;
                for (const Row& row : t.tuples) {
                    Row proj(xs.size());
                    for (size_t i = 0; i < xs.size(); ++i) proj[i] = row[xs[i]];
                    if (!seen.insert(proj).second) continue;
                    std::vector<PremiseAtom> premise(xs.size());
                    for (size_t i = 0; i < xs.size(); ++i) {
                        premise[i].var = xs[i];
                        premise[i].values = {t.domains[xs[i]].values[proj[i]]};
                    }
                    emit_conclusions(t, premise, used, out);
                }
            } else {
                // tuples of non-empty column subsets that share a tuple
                std::vector<Bits> cols(xs.size());
                for (size_t i = 0; i < xs.size(); ++i) cols[i] = t.column(xs[i]);
                std::vector<Bits> sets(xs.size());
                std::vector<PremiseAtom> premise(xs.size());
                auto rec = [&](auto&& self, size_t i) -> void {
                    if (i == xs.size()) {
                        bool shared = false;
                        for (const Row& row : t.tuples) {
                            bool all = true;
                            for (size_t j = 0; j < xs.size() && all; ++j)
                                all = has_bit(sets[j], row[xs[j]]);
                            if (all) {
                                shared = true;
                                break;
                            }
                        }
                        if (!shared) return;
                        for (size_t j = 0; j < xs.size(); ++j) {
                            premise[j].var = xs[j];
                            premise[j].values = t.domains[xs[j]].symbols_of(sets[j]);
                        }
                        emit_conclusions(t, premise, used, out);
                        return;
                    }
                    for (Bits s = cols[i];; s = (s - 1) & cols[i]) {
                        if (s) {
                            sets[i] = s;
                            self(self, i + 1);
                        }
                        if (s == 0) break;
                    }
                };
                rec(rec, 0);
            }
        }
    }
    return out;
}

RuleSet brute_force_rules(const ConstraintTable& t, RuleKind kind, std::optional<int> max_premise) {
    auto valid = brute_force_valid_rules(t, kind, max_premise);

    // mask form per rule for fast extension tests, grouped by conclusion
    struct Key {
        Bits varmask = 0;
        std::vector<Bits> sets;  // indexed by role
    };
    std::vector<Key> keys(valid.size());
    std::map<std::pair<int, Symbol>, std::vector<size_t>> by_concl;
    for (size_t i = 0; i < valid.size(); ++i) {
        keys[i].sets.assign(t.arity(), 0);
        for (const auto& a : valid[i].premise) {
            keys[i].varmask |= bit(a.var);
            keys[i].sets[a.var] = t.domains[a.var].mask_of(a.values);
        }
        by_concl[{valid[i].concl_var, valid[i].concl_value}].push_back(i);
    }
    auto extends_fast = [&](size_t r1, size_t r2) {
        if (!is_subset(keys[r2].varmask, keys[r1].varmask)) return false;
        bool ok = true;
        for_bits(keys[r2].varmask, [&](int v) {
            if (!is_subset(keys[r1].sets[v], keys[r2].sets[v])) ok = false;
        });
        return ok;
    };

    RuleSet rs;
    rs.table = t.name;
    rs.kind = kind;
    rs.vars = t.vars;
    for (const auto& [concl, group] : by_concl)
        for (size_t i : group) {
            bool minimal = true;
            for (size_t j : group)
                if (i != j && extends_fast(i, j) && !(valid[i] == valid[j])) {
                    minimal = false;
                    break;
                }
            if (minimal) rs.rules.push_back(valid[i]);
        }
    canonicalize(rs, t);
    return rs;
}

}  // namespace rulesmith
