#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rulesmith/csp.hpp"
#include "rulesmith/io.hpp"
#include "rulesmith/rules.hpp"

namespace rulesmith {

struct CorpusInfo {
    std::string name;
    std::optional<int> eq_rules;   // expected grouped equality-rule count
    std::optional<int> mem_rules;  // expected grouped membership-rule count
    std::optional<int> cardinality;
    bool bench_tier = false;  // long-running generation, budgeted
    bool external = false;    // table transcribed/derived from outside sources
    bool in_bench = true;     // rendered by the bench command
};

/// Every shipped table, with the expected rule counts where known.
const std::vector<CorpusInfo>& corpus_catalog();
const CorpusInfo* corpus_info(const std::string& name);

std::string corpus_dir();
void set_corpus_dir(std::string dir);

/// Loads `<corpus_dir>/<name>.ct`, cached per name.
TablePtr corpus_table(const std::string& name);

/// Resolver over the corpus catalog (nullptr for unknown names).
TableResolver corpus_resolver();

/// Loads `<corpus_dir>/<name>.csp` together with any rule files it names.
struct Fixture {
    Csp csp;
    std::vector<RuleSet> rules;
};
Fixture corpus_fixture(const std::string& name);

// Programmatic builders; the shipped files are regenerated from these.
ConstraintTable build_bool_table(const std::string& which);  // and, or, xor, not
ConstraintTable build_not_k(int k);
ConstraintTable build_and_k(int k);  // k = 3 uses tokens 0, u, 1
ConstraintTable build_and6();
ConstraintTable build_equiv();
ConstraintTable build_msign();
ConstraintTable build_fork();
ConstraintTable build_t();
ConstraintTable build_line();
ConstraintTable build_l();
ConstraintTable build_arrow();
ConstraintTable build_b10m();
ConstraintTable build_allen();
ConstraintTable build_full_adder();
ConstraintTable build_puzzle_universal();
ConstraintTable build_nonarc();

ConstraintTable build_table(const std::string& name);

/// The 52 ungrouped puzzle rules: two all_different triples plus the clues.
RuleSet build_puzzle_rules(const ConstraintTable& puzzle);

/// The five-instance adder composition over full Boolean domains.
Csp build_adder_csp();

}  // namespace rulesmith
