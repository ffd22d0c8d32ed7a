#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rulesmith/chr.hpp"
#include "rulesmith/corpus.hpp"
#include "rulesmith/generate.hpp"
#include "rulesmith/io.hpp"
#include "rulesmith/oracle.hpp"
#include "rulesmith/search.hpp"

using namespace rulesmith;

namespace {

TablePtr load_table_arg(const std::string& arg) {
    if (arg.find('/') != std::string::npos || arg.ends_with(".ct") || arg.ends_with(".json"))
        return std::make_shared<const ConstraintTable>(load_table(arg));
    return corpus_table(arg);
}

struct TablePool {
    std::map<std::string, TablePtr> extra;
    void add_file(const std::string& path) {
        auto t = std::make_shared<const ConstraintTable>(load_table(path));
        extra[t->name] = t;
    }
    TableResolver resolver() const {
        auto copy = extra;
        return [copy](const std::string& name) -> TablePtr {
            auto it = copy.find(name);
            if (it != copy.end()) return it->second;
            if (corpus_info(name)) return corpus_table(name);
            return nullptr;
        };
    }
};

std::string domain_text(const CspVar& v) {
    std::string s = v.name + " in {";
    bool first = true;
    for_bits(v.domain, [&](int i) {
        s += (first ? "" : ",") + token(v.decl.values[i]);
        first = false;
    });
    return s + "}";
}

void print_solution(const Csp& csp, const std::vector<Symbol>& sol) {
    for (size_t i = 0; i < sol.size(); ++i)
        std::cout << (i ? " " : "") << csp.vars[i].name << "=" << token(sol[i]);
    std::cout << "\n";
}

RuleKind parse_kind(const std::string& s) {
    if (s == "eq" || s == "equality") return RuleKind::equality;
    if (s == "mem" || s == "membership") return RuleKind::membership;
    throw Error("unknown kind '" + s + "' (expected eq or mem)");
}

void print_gen_stats(const GenStats& st) {
    std::fprintf(stderr, "candidates %lld, kept %lld (ungrouped), %.1f ms\n", st.candidates,
                 st.kept, st.ms);
    for (const auto& s : st.stages)
        std::fprintf(stderr, "  premise size %d: %lld candidates, %lld kept, %.1f ms\n",
                     s.premise_size, s.candidates, s.kept, s.ms);
}

int cmd_gen(const std::string& kind, const std::string& table_arg, std::optional<int> max_premise,
            const std::string& out, bool stats, int threads, double budget_sec) {
    GenConfig cfg;
    cfg.kind = parse_kind(kind);
    cfg.max_premise = max_premise;
    cfg.threads = threads;
    if (budget_sec > 0)
        cfg.budget = std::chrono::milliseconds(static_cast<long long>(budget_sec * 1000));
    TablePtr t = load_table_arg(table_arg);
    GenResult res = run_generation(*t, cfg);
    if (stats) print_gen_stats(res.stats);
    if (res.timed_out) {
        std::fprintf(stderr, "generation timed out after %.0f s\n", budget_sec);
        return 1;
    }
    std::string text = to_text(res.rules);
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    return 0;
}

Program build_rules_program(const Csp& csp, const std::string& rules_arg,
                            const std::vector<RuleSet>& file_rules) {
    if (rules_arg == "eq") return make_generated_program(csp, RuleKind::equality);
    if (rules_arg == "mem") return make_generated_program(csp, RuleKind::membership);
    if (rules_arg == "none")
        return make_program(csp, std::vector<const RuleSet*>(csp.instances.size(), nullptr));
    if (!rules_arg.empty()) {
        // a .rules file: attach to instances of the named table
        static std::vector<RuleSet> keep;  // keeps parsed sets alive for the program
        std::string text = read_file(rules_arg);
        std::string tname;
        std::istringstream in(text);
        std::string w0, w1;
        while (in >> w0 >> w1) {
            if (w0 == "table") {
                tname = w1;
                break;
            }
        }
        if (tname.empty()) throw Error(rules_arg + ": missing 'table' header");
        TablePtr t;
        for (const auto& inst : csp.instances)
            if (inst.base->name == tname) t = inst.base;
        if (!t) throw Error(rules_arg + ": no instance uses table '" + tname + "'");
        keep.push_back(parse_rules(text, *t));
        return make_file_program(csp, keep.back());
    }
    // default: rule files named by the .csp, otherwise generated membership rules
    if (!file_rules.empty()) {
        std::vector<const RuleSet*> per(csp.instances.size(), nullptr);
        for (const auto& rs : file_rules)
            for (size_t i = 0; i < csp.instances.size(); ++i)
                if (csp.instances[i].base->name == rs.table) per[i] = &rs;
        return make_program(csp, per);
    }
    return make_generated_program(csp, RuleKind::membership);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rule-based propagation toolkit for extensional constraints"};
    app.require_subcommand(1);
    std::string corpus_override;
    app.add_option("--corpus", corpus_override, "corpus directory override");

    // gen
    auto* gen = app.add_subcommand("gen", "generate minimal valid rules for a table");
    std::string gen_kind, gen_table, gen_out;
    std::optional<int> gen_maxp;
    bool gen_stats = false;
    int gen_threads = 0;
    double gen_budget = 0;
    gen->add_option("--kind", gen_kind, "eq or mem")->required();
    gen->add_option("--table", gen_table, "table file or corpus name")->required();
    gen->add_option("--max-premise", gen_maxp, "cap on premise variable count");
    gen->add_option("--out", gen_out, "output .rules file (default stdout)");
    gen->add_option("--threads", gen_threads, "worker threads (default RULESMITH_THREADS)");
    gen->add_option("--budget", gen_budget, "wall-clock budget in seconds");
    gen->add_flag("--stats", gen_stats, "candidate statistics on stderr");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "labeling search interleaved with propagation");
    std::string solve_csp, solve_rules, solve_strategy = "decl";
    std::vector<std::string> solve_tables;
    std::optional<long long> solve_limit;
    bool solve_all = false, solve_stats = false;
    solve_cmd->add_option("--csp", solve_csp, ".csp file")->required();
    solve_cmd->add_option("--tables", solve_tables, "extra .ct files");
    solve_cmd->add_option("--rules", solve_rules, "eq, mem, none or a .rules file");
    solve_cmd->add_option("--limit", solve_limit, "stop after N solutions");
    solve_cmd->add_option("--strategy", solve_strategy, "decl or sdf (smallest domain first)");
    solve_cmd->add_flag("--all", solve_all, "enumerate every solution (default)");
    solve_cmd->add_flag("--stats", solve_stats, "search statistics on stderr");

    // check
    auto* check = app.add_subcommand("check", "consistency checkers");
    std::string check_csp, check_kind;
    std::vector<std::string> check_tables;
    check->add_option("--csp", check_csp, ".csp file")->required();
    check->add_option("--tables", check_tables, "extra .ct files");
    check->add_option("--consistency", check_kind, "rule, memrule or arc")->required();

    // export
    auto* exp = app.add_subcommand("export", "re-emit a rule file as CHR or canonical text");
    std::string exp_format, exp_in, exp_table, exp_out;
    exp->add_option("--format", exp_format, "chr or rules")->required();
    exp->add_option("--in", exp_in, "input .rules file")->required();
    exp->add_option("--table", exp_table, "table file or corpus name")->required();
    exp->add_option("--out", exp_out, "output file (default stdout)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "brute-force reference computations");
    std::string oracle_what, oracle_csp, oracle_table, oracle_kind = "eq";
    std::vector<std::string> oracle_tables;
    oracle->add_option("what", oracle_what, "gac, rules or solutions")->required();
    oracle->add_option("--csp", oracle_csp, ".csp file");
    oracle->add_option("--table", oracle_table, "table file or corpus name");
    oracle->add_option("--kind", oracle_kind, "eq or mem (for rules)");
    oracle->add_option("--tables", oracle_tables, "extra .ct files");

    // bench
    auto* bench = app.add_subcommand("bench", "rule-generation counts over the corpus");
    std::string bench_filter, bench_tier = "desk";
    double bench_timeout = 1800;
    int bench_threads = 0;
    bench->add_option("--filter", bench_filter, "substring filter on table names");
    bench->add_option("--tier", bench_tier, "desk, bench or all");
    bench->add_option("--timeout", bench_timeout, "per-generation budget in seconds");
    bench->add_option("--threads", bench_threads, "worker threads");

    // compose
    auto* compose = app.add_subcommand("compose", "materialize a CSP into a table");
    std::string comp_csp, comp_interface, comp_name, comp_out;
    std::vector<std::string> comp_tables;
    compose->add_option("--csp", comp_csp, ".csp file")->required();
    compose->add_option("--interface", comp_interface, "comma-separated variable list")->required();
    compose->add_option("--name", comp_name, "name of the produced table")->required();
    compose->add_option("--out", comp_out, "output .ct file (default stdout)");
    compose->add_option("--tables", comp_tables, "extra .ct files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!corpus_override.empty()) set_corpus_dir(corpus_override);

        if (gen->parsed())
            return cmd_gen(gen_kind, gen_table, gen_maxp, gen_out, gen_stats, gen_threads,
                           gen_budget);

        if (solve_cmd->parsed()) {
            TablePool pool;
            for (const auto& p : solve_tables) pool.add_file(p);
            CspFile file = load_csp(solve_csp, pool.resolver());
            std::vector<RuleSet> file_rules;
            for (const auto& rel : file.rules_files) {
                std::string dir = solve_csp.find('/') != std::string::npos
                                      ? solve_csp.substr(0, solve_csp.rfind('/') + 1)
                                      : "";
                std::string text = read_file(dir + rel);
                std::istringstream in(text);
                std::string w0, w1, tname;
                while (in >> w0 >> w1)
                    if (w0 == "table") {
                        tname = w1;
                        break;
                    }
                TablePtr t = pool.resolver()(tname);
                if (!t) throw Error(rel + ": unknown table '" + tname + "'");
                file_rules.push_back(parse_rules(text, *t));
            }
            Program prog = build_rules_program(file.csp, solve_rules, file_rules);
            LabelingStrategy strat;
            if (solve_strategy == "sdf")
                strat.var_order = VarOrder::smallest_domain;
            else if (solve_strategy != "decl")
                throw Error("unknown strategy '" + solve_strategy + "'");
            (void)solve_all;
            SearchResult res = solve_report(file.csp, prog, strat, solve_limit);
            for (const auto& sol : res.solutions) print_solution(file.csp, sol);
            if (solve_stats)
                std::fprintf(stderr,
                             "nodes %lld, splits %lld, prunes %lld, propagation_only %s\n",
                             res.stats.nodes, res.stats.splits, res.stats.prunes,
                             res.stats.propagation_only ? "yes" : "no");
            return res.solutions.empty() ? 1 : 0;
        }

        if (check->parsed()) {
            TablePool pool;
            for (const auto& p : check_tables) pool.add_file(p);
            Csp csp = load_csp(check_csp, pool.resolver()).csp;
            ConsistencyReport rep;
            std::string label;
            if (check_kind == "rule") {
                rep = check_rule_consistent(csp);
                label = "rule-consistent";
            } else if (check_kind == "memrule") {
                rep = check_membership_rule_consistent(csp);
                label = "membership-rule-consistent";
            } else if (check_kind == "arc") {
                rep = check_arc_consistent(csp);
                label = "arc-consistent";
            } else {
                throw Error("unknown consistency '" + check_kind + "'");
            }
            if (rep.failed) {
                std::cout << "failed: empty domain\n";
                return 1;
            }
            std::cout << label << ": " << (rep.consistent ? "yes" : "no") << "\n";
            return rep.consistent ? 0 : 1;
        }

        if (exp->parsed()) {
            TablePtr t = load_table_arg(exp_table);
            RuleSet rs = load_rules(exp_in, *t);
            std::string text = exp_format == "chr"    ? to_chr(rs, *t)
                               : exp_format == "rules" ? to_text(rs)
                                                       : throw Error("unknown format");
            if (exp_out.empty())
                std::cout << text;
            else
                write_file(exp_out, text);
            return 0;
        }

        if (oracle->parsed()) {
            TablePool pool;
            for (const auto& p : oracle_tables) pool.add_file(p);
            if (oracle_what == "gac") {
                if (oracle_csp.empty()) throw Error("oracle gac needs --csp");
                Csp csp = load_csp(oracle_csp, pool.resolver()).csp;
                Csp out = gac_oracle(csp);
                for (const auto& v : out.vars) std::cout << domain_text(v) << "\n";
                return out.failed() ? 1 : 0;
            }
            if (oracle_what == "rules") {
                if (oracle_table.empty()) throw Error("oracle rules needs --table");
                TablePtr t = load_table_arg(oracle_table);
                std::cout << to_text(brute_force_rules(*t, parse_kind(oracle_kind)));
                return 0;
            }
            if (oracle_what == "solutions") {
                if (oracle_csp.empty()) throw Error("oracle solutions needs --csp");
                Csp csp = load_csp(oracle_csp, pool.resolver()).csp;
                auto sols = solutions(csp);
                for (const auto& s : sols) print_solution(csp, s);
                return sols.empty() ? 1 : 0;
            }
            throw Error("unknown oracle '" + oracle_what + "'");
        }

        if (bench->parsed()) {
            std::printf("%-12s %5s %4s %5s %8s %8s\n", "constraint", "arity", "|D|", "|C|",
                        "eq", "mem");
            for (const auto& info : corpus_catalog()) {
                if (!info.in_bench) continue;
                if (!bench_filter.empty() &&
                    info.name.find(bench_filter) == std::string::npos)
                    continue;
                if (bench_tier == "desk" && info.bench_tier) continue;
                if (bench_tier == "bench" && !info.bench_tier) continue;
                TablePtr t = corpus_table(info.name);
                std::string counts[2];
                double times[2];
                for (int k = 0; k < 2; ++k) {
                    GenConfig cfg;
                    cfg.kind = k == 0 ? RuleKind::equality : RuleKind::membership;
                    cfg.threads = bench_threads;
                    cfg.budget = std::chrono::milliseconds(
                        static_cast<long long>(bench_timeout * 1000));
                    GenResult res = run_generation(*t, cfg);
                    counts[k] = res.timed_out
                                    ? "-"
                                    : std::to_string(group_by_premise(res.rules).size());
                    times[k] = res.stats.ms / 1000.0;
                }
                std::printf("%-12s %5d %4d %5zu %8s %8s\n", info.name.c_str(), t->arity(),
                            t->domains[0].size(), t->tuples.size(), counts[0].c_str(),
                            counts[1].c_str());
                std::fprintf(stderr, "%-12s eq %.2fs mem %.2fs\n", info.name.c_str(), times[0],
                             times[1]);
            }
            return 0;
        }

        if (compose->parsed()) {
            TablePool pool;
            for (const auto& p : comp_tables) pool.add_file(p);
            Csp csp = load_csp(comp_csp, pool.resolver()).csp;
            std::vector<std::string> iface;
            std::string cur;
            for (char c : comp_interface + ",") {
                if (c == ',') {
                    if (!cur.empty()) iface.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            ConstraintTable t = materialize(csp, iface, comp_name);
            std::string text = write_table(t);
            if (comp_out.empty())
                std::cout << text;
            else
                write_file(comp_out, text);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
