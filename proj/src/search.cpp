#include "rulesmith/search.hpp"

#include <algorithm>

namespace rulesmith {

namespace {

int pick_var(const std::vector<Bits>& dom, VarOrder order) {
    int best = -1, best_size = 0;
    for (size_t i = 0; i < dom.size(); ++i) {
        int sz = popcount(dom[i]);
        if (sz <= 1) continue;
        if (order == VarOrder::declaration) return static_cast<int>(i);
        if (best < 0 || sz < best_size) {
            best = static_cast<int>(i);
            best_size = sz;
        }
    }
    return best;
}

bool verify_solution(const Csp& csp, const std::vector<Bits>& dom) {
    for (const auto& inst : csp.instances) {
        Row r(inst.binding.size());
        for (size_t role = 0; role < inst.binding.size(); ++role) {
            int j = std::countr_zero(dom[inst.binding[role]]);
            r[role] = inst.role_index[role][j];
        }
        if (!inst.base->has_row(r)) return false;
    }
    return true;
}

}  // namespace

SearchResult solve_report(const Csp& csp, const Program& rules, LabelingStrategy strat,
                          std::optional<long long> limit,
                          const std::function<void(const Csp&)>* on_node) {
    SearchResult res;
    if (limit && *limit <= 0) return res;

    // explicit stack; depth bounded by the sum of domain sizes
    std::vector<std::vector<Bits>> stack;
    stack.push_back(csp.domain_vector());
    while (!stack.empty()) {
        std::vector<Bits> dom = std::move(stack.back());
        stack.pop_back();

        auto [closed, trace] = propagate(with_domains(csp, std::move(dom)), rules);
        res.stats.nodes++;
        res.stats.prunes += static_cast<long long>(trace.steps.size());
        if (on_node) (*on_node)(closed);
        if (closed.failed()) continue;

        std::vector<Bits> cd = closed.domain_vector();
        int var = pick_var(cd, strat.var_order);
        if (var < 0) {
            if (!verify_solution(closed, cd)) continue;
            std::vector<Symbol> sol(cd.size());
            for (size_t i = 0; i < cd.size(); ++i)
                sol[i] = closed.vars[i].decl.values[std::countr_zero(cd[i])];
            res.solutions.push_back(std::move(sol));
            if (limit && static_cast<long long>(res.solutions.size()) >= *limit) break;
            continue;
        }

        res.stats.splits++;
        Bits v = bit(std::countr_zero(cd[var]));  // smallest value in declaration order
        std::vector<Bits> rest = cd;
        rest[var] &= ~v;
        std::vector<Bits> single = std::move(cd);
        single[var] = v;
        stack.push_back(std::move(rest));    // explored second
        stack.push_back(std::move(single));  // explored first
    }
    res.stats.propagation_only = res.stats.splits == 0;
    return res;
}

std::vector<std::vector<Symbol>> solve(const Csp& csp, const Program& rules,
                                       LabelingStrategy strat, std::optional<long long> limit) {
    return solve_report(csp, rules, strat, limit).solutions;
}

}  // namespace rulesmith
