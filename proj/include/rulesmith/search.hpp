#pragma once

#include <functional>
#include <optional>

#include "rulesmith/propagate.hpp"

namespace rulesmith {

enum class VarOrder { declaration, smallest_domain };

struct LabelingStrategy {
    VarOrder var_order = VarOrder::declaration;
    // value order is always ascending declaration order
};

struct SearchStats {
    long long nodes = 0;   // propagation closures computed
    long long splits = 0;  // binary domain splits
    long long prunes = 0;  // values removed by rules
    bool propagation_only = false;  // solved or refuted without splitting
};

struct SearchResult {
    std::vector<std::vector<Symbol>> solutions;
    SearchStats stats;
};

/// Depth-first search interleaving closure computation with binary splits
/// ({v} against the rest). Every reported solution is re-verified against
/// every instance's tuples.
SearchResult solve_report(const Csp& csp, const Program& rules, LabelingStrategy strat = {},
                          std::optional<long long> limit = {},
                          const std::function<void(const Csp&)>* on_node = nullptr);

std::vector<std::vector<Symbol>> solve(const Csp& csp, const Program& rules,
                                       LabelingStrategy strat = {},
                                       std::optional<long long> limit = {});

}  // namespace rulesmith
