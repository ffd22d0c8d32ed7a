#include "rulesmith/propagate.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <random>

#include "rulesmith/generate.hpp"

namespace rulesmith {

Program make_program(const Csp& csp, const std::vector<const RuleSet*>& per_instance) {
    if (per_instance.size() != csp.instances.size())
        throw Error("make_program: one rule set per instance expected");
    Program p;
    p.nvars = static_cast<int>(csp.vars.size());
    p.watchers.resize(csp.vars.size());
    for (size_t ii = 0; ii < csp.instances.size(); ++ii) {
        const ConstraintInstance& inst = csp.instances[ii];
        p.tables.push_back(inst.base->name);
        const RuleSet* rs = per_instance[ii];
        if (!rs) continue;
        const bool exact = rs->kind == RuleKind::equality;
        for (size_t ri = 0; ri < rs->rules.size(); ++ri) {
            const Rule& r = rs->rules[ri];
            Program::PRule pr;
            pr.instance = static_cast<int>(ii);
            pr.rule_index = static_cast<int>(ri);
            for (const auto& a : r.premise) {
                if (a.var < 0 || a.var >= inst.base->arity())
                    throw Error("rule premise variable outside instance arity");
                Program::PAtom pa;
                pa.var = inst.binding[a.var];
                pa.exact = exact;
                pa.allowed = 0;
                const DomainDecl& vd = csp.vars[pa.var].decl;
                for (Symbol s : a.values) {
                    int j = vd.index_of(s);
                    if (j >= 0) pa.allowed |= bit(j);
                }
                if (exact && pa.allowed == 0) pr.dead = true;  // singleton unrepresentable
                pr.premise.push_back(pa);
            }
            pr.concl_var = inst.binding[r.concl_var];
            int j = csp.vars[pr.concl_var].decl.index_of(r.concl_value);
            pr.concl_bit = j >= 0 ? bit(j) : 0;
            int id = static_cast<int>(p.rules.size());
            p.rules.push_back(std::move(pr));
            for (const auto& pa : p.rules.back().premise) {
                auto& w = p.watchers[pa.var];
                if (w.empty() || w.back() != id) w.push_back(id);
            }
            auto& wc = p.watchers[p.rules.back().concl_var];
            if (wc.empty() || wc.back() != id) wc.push_back(id);
        }
    }
    return p;
}

const RuleSet& cached_rules(const TablePtr& table, RuleKind kind) {
    static std::mutex mtx;
    // the cached shared_ptr pins the table so a recycled address cannot alias
    static std::map<std::pair<const ConstraintTable*, RuleKind>, std::pair<TablePtr, RuleSet>>
        cache;
    std::scoped_lock lock(mtx);
    auto key = std::make_pair(table.get(), kind);
    auto it = cache.find(key);
    if (it == cache.end()) {
        GenConfig cfg;
        cfg.kind = kind;
        it = cache.emplace(key, std::make_pair(table, run_generation(*table, cfg).rules)).first;
    }
    return it->second.second;
}

Program make_generated_program(const Csp& csp, RuleKind kind) {
    std::vector<const RuleSet*> per;
    per.reserve(csp.instances.size());
    for (const auto& inst : csp.instances) per.push_back(&cached_rules(inst.base, kind));
    return make_program(csp, per);
}

Program make_file_program(const Csp& csp, const RuleSet& rs) {
    std::vector<const RuleSet*> per;
    bool any = false;
    for (const auto& inst : csp.instances) {
        if (inst.base->name == rs.table) {
            per.push_back(&rs);
            any = true;
        } else {
            per.push_back(nullptr);
        }
    }
    if (!any) throw Error("rules for '" + rs.table + "' match no instance");
    return make_program(csp, per);
}

std::string to_text(const Trace& tr, const Program& p, const Csp& csp) {
    std::string out;
    for (size_t i = 0; i < tr.steps.size(); ++i) {
        const TraceStep& s = tr.steps[i];
        const Program::PRule& r = p.rules[s.rule];
        out += "step " + std::to_string(i + 1) + ": " + p.tables[r.instance] + "." +
               std::to_string(r.rule_index) + " prunes " + csp.vars[s.var].name +
               " != " + token(s.value) + "\n";
    }
    return out;
}

namespace {

bool fires_on(const std::vector<Bits>& dom, const Program::PRule& r) {
    if (r.dead) return false;
    for (const auto& a : r.premise) {
        if (a.exact) {
            if (dom[a.var] != a.allowed) return false;
        } else {
            if (!is_subset(dom[a.var], a.allowed)) return false;
        }
    }
    return true;
}

bool relevant_on(const std::vector<Bits>& dom, const Program::PRule& r) {
    return (dom[r.concl_var] & r.concl_bit) != 0;
}

template <class PickFn>
std::pair<Csp, Trace> run_to_closure(const Csp& csp, const Program& p, PickFn&& pick) {
    std::vector<Bits> dom = csp.domain_vector();
    Trace tr;
    std::vector<char> queued(p.rules.size(), 1);
    std::vector<int> worklist(p.rules.size());
    for (size_t i = 0; i < worklist.size(); ++i) worklist[i] = static_cast<int>(i);
    while (!worklist.empty()) {
        int slot = pick(static_cast<int>(worklist.size()));
        int id = worklist[slot];
        worklist.erase(worklist.begin() + slot);
        queued[id] = 0;
        const Program::PRule& r = p.rules[id];
        if (!fires_on(dom, r) || !relevant_on(dom, r)) continue;
        dom[r.concl_var] &= ~r.concl_bit;
        tr.steps.push_back({id, r.concl_var,
                            csp.vars[r.concl_var].decl.values[std::countr_zero(r.concl_bit)]});
        for (int w : p.watchers[r.concl_var]) {
            if (!queued[w]) {
                queued[w] = 1;
                worklist.push_back(w);
            }
        }
    }
    return {with_domains(csp, std::move(dom)), std::move(tr)};
}

}  // namespace

bool fires(const Csp& csp, const Program& p, int rule) {
    return fires_on(csp.domain_vector(), p.rules.at(rule));
}

bool is_relevant(const Csp& csp, const Program& p, int rule) {
    return relevant_on(csp.domain_vector(), p.rules.at(rule));
}

Csp apply_rule(const Csp& csp, const Program& p, int rule) {
    const Program::PRule& r = p.rules.at(rule);
    std::vector<Bits> dom = csp.domain_vector();
    if (!fires_on(dom, r)) throw Error("apply_rule: rule does not fire");
    dom[r.concl_var] &= ~r.concl_bit;
    return with_domains(csp, std::move(dom));
}

std::pair<Csp, Trace> propagate(const Csp& csp, const Program& p) {
    return run_to_closure(csp, p, [](int) { return 0; });
}

std::pair<Csp, Trace> propagate_shuffled(const Csp& csp, const Program& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return run_to_closure(csp, p, [&rng](int n) {
        return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
    });
}

namespace {

ConsistencyReport check_closed(const Csp& csp, RuleKind kind) {
    ConsistencyReport rep;
    if (csp.failed()) {
        rep.failed = true;
        return rep;
    }
    Program p = make_generated_program(csp, kind);
    std::vector<Bits> dom = csp.domain_vector();
    for (const auto& r : p.rules)
        if (fires_on(dom, r) && relevant_on(dom, r)) {
            rep.consistent = false;
            return rep;
        }
    rep.consistent = true;
    return rep;
}

// role-layout domains of an instance's bound variables
std::vector<Bits> role_domains(const ConstraintInstance& inst, const std::vector<Bits>& dom) {
    std::vector<Bits> rd(inst.binding.size(), 0);
    for (size_t r = 0; r < inst.binding.size(); ++r) {
        Bits d = dom[inst.binding[r]];
        for_bits(d, [&](int j) { rd[r] |= bit(inst.role_index[r][j]); });
    }
    return rd;
}

}  // namespace

ConsistencyReport check_rule_consistent(const Csp& csp) {
    return check_closed(csp, RuleKind::equality);
}

ConsistencyReport check_membership_rule_consistent(const Csp& csp) {
    return check_closed(csp, RuleKind::membership);
}

ConsistencyReport check_arc_consistent(const Csp& csp) {
    ConsistencyReport rep;
    if (csp.failed()) {
        rep.failed = true;
        return rep;
    }
    std::vector<Bits> dom = csp.domain_vector();
    for (const auto& inst : csp.instances) {
        std::vector<Bits> rd = role_domains(inst, dom);
        std::vector<Bits> supported(rd.size(), 0);
        for (const Row& row : inst.base->tuples) {
            bool in = true;
            for (size_t r = 0; r < rd.size() && in; ++r) in = has_bit(rd[r], row[r]);
            if (!in) continue;
            for (size_t r = 0; r < rd.size(); ++r) supported[r] |= bit(row[r]);
        }
        for (size_t r = 0; r < rd.size(); ++r)
            if (!is_subset(rd[r], supported[r])) {
                rep.consistent = false;
                return rep;
            }
    }
    rep.consistent = true;
    return rep;
}

Csp gac_oracle(const Csp& csp) {
    std::vector<Bits> dom = csp.domain_vector();
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& inst : csp.instances) {
            std::vector<Bits> rd = role_domains(inst, dom);
            std::vector<Bits> supported(rd.size(), 0);
            for (const Row& row : inst.base->tuples) {
                bool in = true;
                for (size_t r = 0; r < rd.size() && in; ++r) in = has_bit(rd[r], row[r]);
                if (!in) continue;
                for (size_t r = 0; r < rd.size(); ++r) supported[r] |= bit(row[r]);
            }
            for (size_t r = 0; r < rd.size(); ++r) {
                int vi = inst.binding[r];
                Bits keep = 0;
                for_bits(dom[vi], [&](int j) {
                    if (has_bit(supported[r], inst.role_index[r][j])) keep |= bit(j);
                });
                if (keep != dom[vi]) {
                    dom[vi] = keep;
                    changed = true;
                }
            }
        }
    }
    return with_domains(csp, std::move(dom));
}

}  // namespace rulesmith
