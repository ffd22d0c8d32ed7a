#include "rulesmith/generate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <set>
#include <thread>

namespace rulesmith {

int default_thread_count() {
    if (const char* env = std::getenv("RULESMITH_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return std::min(n, 64);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(std::min(hw, 16u)) : 1;
}

namespace {

constexpr int kMaxArity = 16;

using Clock = std::chrono::steady_clock;

// Set of tuple indices, fixed word count per table.
struct RowMask {
    std::vector<std::uint64_t> w;
    explicit RowMask(int words = 0) : w(words, 0) {}
    void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool none() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }
    int count() const {
        int c = 0;
        for (auto x : w) c += std::popcount(x);
        return c;
    }
    static bool and_none(const RowMask& a, const RowMask& b) {
        for (size_t i = 0; i < a.w.size(); ++i)
            if (a.w[i] & b.w[i]) return false;
        return true;
    }
    static void and_into(RowMask& dst, const RowMask& a, const RowMask& b) {
        for (size_t i = 0; i < a.w.size(); ++i) dst.w[i] = a.w[i] & b.w[i];
    }
    void or_with(const RowMask& a) {
        for (size_t i = 0; i < w.size(); ++i) w[i] |= a.w[i];
    }
    template <class F>
    void for_each(F&& f) const {
        for (size_t k = 0; k < w.size(); ++k) {
            std::uint64_t x = w[k];
            while (x) {
                f(static_cast<int>(k * 64) + std::countr_zero(x));
                x &= x - 1;
            }
        }
    }
};

// Per-table precomputation shared by both generators.
struct Work {
    const ConstraintTable& t;
    int n, nrows, words;
    std::vector<std::uint8_t> cells;              // row-major values
    std::vector<std::vector<RowMask>> with_val;   // [var][validx] -> rows
    std::vector<Bits> col;                        // occurring values per var
    std::vector<std::vector<RowMask>> rows_of;    // [var][mask] -> rows, subsets of col only
    std::vector<std::vector<std::vector<Bits>>> by_pop;  // [var][popcount] -> masks ascending

    explicit Work(const ConstraintTable& table, bool membership) : t(table) {
        n = t.arity();
        nrows = static_cast<int>(t.tuples.size());
        if (n > kMaxArity) throw Error("generation supports arity <= 16");
        if (nrows == 0) throw Error("generation requires a non-empty table");
        words = (nrows + 63) / 64;
        cells.resize(static_cast<size_t>(nrows) * n);
        for (int r = 0; r < nrows; ++r)
            for (int i = 0; i < n; ++i) cells[static_cast<size_t>(r) * n + i] = t.tuples[r][i];
        with_val.resize(n);
        col.resize(n);
        for (int i = 0; i < n; ++i) {
            with_val[i].assign(t.domains[i].size(), RowMask(words));
            for (int r = 0; r < nrows; ++r) with_val[i][cell(r, i)].set(r);
            col[i] = t.column(i);
        }
        if (membership) {
            rows_of.resize(n);
            by_pop.resize(n);
            for (int i = 0; i < n; ++i) {
                const Bits c = col[i];
                rows_of[i].assign(static_cast<size_t>(c) + 1, RowMask(0));
                by_pop[i].assign(popcount(c) + 1, {});
                rows_of[i][0] = RowMask(words);
                for (Bits m = 1; m <= c; ++m) {
                    if (!is_subset(m, c)) continue;
                    int low = std::countr_zero(m);
                    rows_of[i][m] = rows_of[i][m & (m - 1)];
                    rows_of[i][m].or_with(with_val[i][low]);
                    by_pop[i][popcount(m)].push_back(m);
                }
            }
        }
    }
    std::uint8_t cell(int r, int i) const { return cells[static_cast<size_t>(r) * n + i]; }
};

// Kept rules indexed for the "does not extend an element of L" test.
// Key = conclusion; entries hold the premise role mask and per-role payloads.
struct ExtIndex {
    int n = 0;
    struct Entry {
        Bits varmask;
        std::uint32_t off;
    };
    std::vector<std::vector<Entry>> by_key;
    std::vector<Bits> pool;

    ExtIndex(int arity, const ConstraintTable& t) : n(arity) {
        by_key.resize(static_cast<size_t>(arity) * 64);
        (void)t;
    }
    int key(int y, int d) const { return y * 64 + d; }

    // candidate extends entry iff entry roles subset of xmask and candidate
    // payload pointwise subset of entry payload
    bool extends_any(int y, int d, Bits xmask, const std::array<Bits, kMaxArity>& cand) const {
        for (const Entry& e : by_key[key(y, d)]) {
            if (!is_subset(e.varmask, xmask)) continue;
            bool all = true;
            std::uint32_t off = e.off;
            Bits vm = e.varmask;
            while (vm) {
                int v = std::countr_zero(vm);
                vm &= vm - 1;
                if (!is_subset(cand[v], pool[off++])) {
                    all = false;
                    break;
                }
            }
            if (all) return true;
        }
        return false;
    }

    void insert(int y, int d, Bits xmask, const std::array<Bits, kMaxArity>& sets) {
        Entry e;
        e.varmask = xmask;
        e.off = static_cast<std::uint32_t>(pool.size());
        Bits vm = xmask;
        while (vm) {
            int v = std::countr_zero(vm);
            vm &= vm - 1;
            pool.push_back(sets[v]);
        }
        by_key[key(y, d)].push_back(e);
    }
};

// One kept candidate, still in mask form.
struct Keeper {
    Bits varmask;
    std::array<Bits, kMaxArity> sets;
    int y, d;
};

struct Shared {
    const Work& work;
    const GenConfig& cfg;
    ExtIndex index;
    std::optional<Clock::time_point> deadline;
    std::atomic<bool> expired{false};

    Shared(const Work& w, const GenConfig& c)
        : work(w), cfg(c), index(w.n, w.t) {
        if (c.budget) deadline = Clock::now() + *c.budget;
    }
    bool check_deadline() {
        if (!deadline) return false;
        if (expired.load(std::memory_order_relaxed)) return true;
        if (Clock::now() >= *deadline) {
            expired.store(true, std::memory_order_relaxed);
            return true;
        }
        return false;
    }
};

// Evaluates the conclusions of one premise: for each free role y, the values
// d that no premise-matching tuple takes. Counts all (y, d) pairs as
// candidates and forwards survivors of the extension test.
struct ConclusionScan {
    const Work& w;
    const ExtIndex& index;
    long long candidates = 0;
    std::vector<Keeper>* out;

    void run(Bits xmask, const std::array<Bits, kMaxArity>& sets, const RowMask& rows) {
        const int nrows_matched = rows.count();
        for (int y = 0; y < w.n; ++y) {
            if (has_bit(xmask, y)) continue;
            const int dsz = w.t.domains[y].size();
            candidates += dsz;
            Bits invalid = 0;  // values that occur under the premise
            if (nrows_matched <= dsz) {
                rows.for_each([&](int r) { invalid |= bit(w.cell(r, y)); });
            } else {
                for (int d = 0; d < dsz; ++d)
                    if (!RowMask::and_none(rows, w.with_val[y][d])) invalid |= bit(d);
            }
            Bits valid = w.t.domains[y].full() & ~invalid;
            for_bits(valid, [&](int d) {
                if (index.extends_any(y, d, xmask, sets)) return;
                out->push_back({xmask, sets, y, d});
            });
        }
    }
};

std::vector<std::vector<int>> var_combinations(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int from) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = from; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Runs `chunk(i, keepers, candidates)` over [0, nchunks) on a small pool and
// merges per-chunk keeper lists in chunk order.
struct WaveRunner {
    Shared& sh;
    int threads;

    template <class ChunkFn>
    bool run(int nchunks, std::vector<Keeper>& merged, long long& candidates, ChunkFn&& chunk) {
        if (nchunks == 0) return true;
        std::vector<std::vector<Keeper>> results(nchunks);
        std::vector<long long> counts(nchunks, 0);
        const int workers = std::max(1, std::min(threads, nchunks));
        if (workers == 1) {
            for (int i = 0; i < nchunks; ++i) {
                if (sh.check_deadline()) return false;
                chunk(i, results[i], counts[i]);
            }
        } else {
            std::atomic<int> next{0};
            auto body = [&] {
                while (true) {
                    int i = next.fetch_add(1);
                    if (i >= nchunks || sh.expired.load(std::memory_order_relaxed)) return;
                    if (sh.check_deadline()) return;
                    chunk(i, results[i], counts[i]);
                }
            };
            std::vector<std::thread> pool;
            for (int w = 0; w < workers - 1; ++w) pool.emplace_back(body);
            body();
            for (auto& th : pool) th.join();
            if (sh.expired.load()) return false;
        }
        for (int i = 0; i < nchunks; ++i) {
            candidates += counts[i];
            merged.insert(merged.end(), results[i].begin(), results[i].end());
        }
        return true;
    }
};

// Distinct row projections onto xs, ascending.
std::vector<Row> distinct_projections(const Work& w, const std::vector<int>& xs) {
    std::set<Row> seen;
    for (int r = 0; r < w.nrows; ++r) {
        Row p(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) p[i] = w.cell(r, xs[i]);
        seen.insert(std::move(p));
    }
    return {seen.begin(), seen.end()};
}

// Compositions (c_1..c_k) with sum = total, 1 <= c_i <= maxs[i], lexicographic.
std::vector<std::vector<int>> compositions(int total, const std::vector<int>& maxs) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(maxs.size());
    auto rec = [&](auto&& self, size_t i, int left) -> void {
        if (i == maxs.size()) {
            if (left == 0) out.push_back(cur);
            return;
        }
        int rest_min = static_cast<int>(maxs.size() - i - 1);
        int rest_max = 0;
        for (size_t j = i + 1; j < maxs.size(); ++j) rest_max += maxs[j];
        for (int c = 1; c <= maxs[i]; ++c) {
            if (left - c < rest_min || left - c > rest_max) continue;
            cur[i] = c;
            self(self, i + 1, left - c);
        }
    };
    rec(rec, 0, total);
    return out;
}

void equality_stage(Shared& sh, int size, std::vector<Keeper>& merged, long long& candidates) {
    const Work& w = sh.work;
    auto combos = var_combinations(w.n, size);
    WaveRunner runner{sh, sh.cfg.threads};
    runner.run(static_cast<int>(combos.size()), merged, candidates,
               [&](int ci, std::vector<Keeper>& out, long long& cnt) {
                   const auto& xs = combos[ci];
                   Bits xmask = 0;
                   for (int x : xs) xmask |= bit(x);
                   ConclusionScan scan{w, sh.index, 0, &out};
                   RowMask rows(w.words);
                   std::array<Bits, kMaxArity> sets{};
                   for (const Row& proj : distinct_projections(w, xs)) {
                       if (xs.empty()) {
                           for (auto& word : rows.w) word = ~std::uint64_t{0};
                           if (w.nrows & 63)
                               rows.w.back() = (std::uint64_t{1} << (w.nrows & 63)) - 1;
                       } else {
                           rows = w.with_val[xs[0]][proj[0]];
                           RowMask tmp(w.words);
                           for (size_t i = 1; i < xs.size(); ++i) {
                               RowMask::and_into(tmp, rows, w.with_val[xs[i]][proj[i]]);
                               rows = tmp;
                           }
                       }
                       for (size_t i = 0; i < xs.size(); ++i) sets[xs[i]] = bit(proj[i]);
                       scan.run(xmask, sets, rows);
                       if ((scan.candidates & 0xfff) == 0 && sh.check_deadline()) return;
                   }
                   cnt = scan.candidates;
               });
}

// Stage 0 of either kind: the empty premise matches every row.
void empty_premise_stage(Shared& sh, std::vector<Keeper>& merged, long long& candidates) {
    const Work& w = sh.work;
    RowMask all(w.words);
    for (int r = 0; r < w.nrows; ++r) all.set(r);
    std::vector<Keeper> out;
    ConclusionScan scan{w, sh.index, 0, &out};
    std::array<Bits, kMaxArity> sets{};
    scan.run(0, sets, all);
    candidates += scan.candidates;
    merged.insert(merged.end(), out.begin(), out.end());
}

void membership_wave(Shared& sh, const std::vector<std::vector<int>>& combos, int total,
                     std::vector<Keeper>& merged, long long& candidates) {
    const Work& w = sh.work;
    // chunk = (combo, composition, first-subset block)
    struct Chunk {
        const std::vector<int>* xs;
        std::vector<int> comp;
        int s0_begin, s0_end;
    };
    std::vector<Chunk> chunks;
    for (const auto& xs : combos) {
        if (xs.empty()) continue;
        std::vector<int> maxs(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) maxs[i] = popcount(w.col[xs[i]]);
        for (auto& comp : compositions(total, maxs)) {
            const auto& firsts = w.by_pop[xs[0]][comp[0]];
            const int block = 64;
            for (int b = 0; b < static_cast<int>(firsts.size()); b += block)
                chunks.push_back({&xs, comp,
                                  b, std::min<int>(b + block, static_cast<int>(firsts.size()))});
        }
    }
    WaveRunner runner{sh, sh.cfg.threads};
    runner.run(static_cast<int>(chunks.size()), merged, candidates,
               [&](int ci, std::vector<Keeper>& out, long long& cnt) {
                   const Chunk& ch = chunks[ci];
                   const auto& xs = *ch.xs;
                   const size_t k = xs.size();
                   Bits xmask = 0;
                   for (int x : xs) xmask |= bit(x);
                   ConclusionScan scan{w, sh.index, 0, &out};
                   std::array<Bits, kMaxArity> sets{};
                   std::vector<RowMask> partial(k, RowMask(w.words));
                   long long tick = 0;
                   auto rec = [&](auto&& self, size_t i) -> void {
                       if (sh.expired.load(std::memory_order_relaxed)) return;
                       if (i == k) {
                           scan.run(xmask, sets, partial[k - 1]);
                           return;
                       }
                       const auto& pool = w.by_pop[xs[i]][ch.comp[i]];
                       int from = (i == 0) ? ch.s0_begin : 0;
                       int to = (i == 0) ? ch.s0_end : static_cast<int>(pool.size());
                       for (int j = from; j < to; ++j) {
                           Bits s = pool[j];
                           if ((++tick & 0x3ff) == 0 && sh.check_deadline()) return;
                           if (i == 0)
                               partial[0] = w.rows_of[xs[0]][s];
                           else
                               RowMask::and_into(partial[i], partial[i - 1], w.rows_of[xs[i]][s]);
                           if (partial[i].none()) continue;  // not a weak assignment
                           sets[xs[i]] = s;
                           self(self, i + 1);
                       }
                   };
                   rec(rec, 0);
                   cnt = scan.candidates;
               });
}

RuleSet to_ruleset(const ConstraintTable& t, RuleKind kind, const std::vector<Keeper>& keepers) {
    RuleSet rs;
    rs.table = t.name;
    rs.kind = kind;
    rs.vars = t.vars;
    rs.rules.reserve(keepers.size());
    for (const Keeper& k : keepers) {
        Rule r;
        for_bits(k.varmask, [&](int v) {
            PremiseAtom a;
            a.var = v;
            a.values = t.domains[v].symbols_of(k.sets[v]);
            r.premise.push_back(std::move(a));
        });
        r.concl_var = k.y;
        r.concl_value = t.domains[k.y].values[k.d];
        rs.rules.push_back(std::move(r));
    }
    canonicalize(rs, t);
    return rs;
}

}  // namespace

GenResult run_generation(const ConstraintTable& t, const GenConfig& cfg_in) {
    GenConfig cfg = cfg_in;
    if (cfg.threads <= 0) cfg.threads = default_thread_count();
    const auto t0 = Clock::now();
    Work work(t, cfg.kind == RuleKind::membership);
    Shared sh(work, cfg);

    const int n = work.n;
    int cap = n - 1;
    if (cfg.max_premise) {
        if (*cfg.max_premise < 0 || *cfg.max_premise > n - 1)
            throw Error("max_premise outside [0, arity-1]");
        cap = *cfg.max_premise;
    }

    GenResult result;
    std::vector<Keeper> all;
    for (int size = 0; size <= cap; ++size) {
        const auto s0 = Clock::now();
        StageStats st;
        st.premise_size = size;
        std::vector<Keeper> stage_keepers;
        if (size == 0) {
            empty_premise_stage(sh, stage_keepers, st.candidates);
            for (const Keeper& k : stage_keepers) sh.index.insert(k.y, k.d, k.varmask, k.sets);
        } else if (cfg.kind == RuleKind::equality) {
            equality_stage(sh, size, stage_keepers, st.candidates);
            if (sh.expired.load()) {
                result.timed_out = true;
                break;
            }
            for (const Keeper& k : stage_keepers) sh.index.insert(k.y, k.d, k.varmask, k.sets);
        } else {
            auto combos = var_combinations(n, size);
            int max_total = 0;
            for (const auto& xs : combos) {
                int s = 0;
                for (int x : xs) s += popcount(work.col[x]);
                max_total = std::max(max_total, s);
            }
            // waves: descending total cardinality; keepers of one wave cannot
            // extend each other, so the index is frozen per wave
            for (int total = max_total; total >= size; --total) {
                std::vector<Keeper> wave;
                membership_wave(sh, combos, total, wave, st.candidates);
                if (sh.expired.load()) break;
                for (const Keeper& k : wave) sh.index.insert(k.y, k.d, k.varmask, k.sets);
                stage_keepers.insert(stage_keepers.end(), wave.begin(), wave.end());
            }
            if (sh.expired.load()) {
                result.timed_out = true;
                break;
            }
        }
        st.kept = static_cast<long long>(stage_keepers.size());
        st.ms = std::chrono::duration<double, std::milli>(Clock::now() - s0).count();
        result.stats.stages.push_back(st);
        result.stats.candidates += st.candidates;
        result.stats.kept += st.kept;
        all.insert(all.end(), stage_keepers.begin(), stage_keepers.end());
    }

    result.stats.ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (result.timed_out) {
        result.stats.kept = 0;
        return result;
    }
    result.rules = to_ruleset(t, cfg.kind, all);
    return result;
}

RuleSet generate_equality_rules(const ConstraintTable& t, std::optional<int> max_premise) {
    GenConfig cfg;
    cfg.kind = RuleKind::equality;
    cfg.max_premise = max_premise;
    return run_generation(t, cfg).rules;
}

RuleSet generate_membership_rules(const ConstraintTable& t, std::optional<int> max_premise) {
    GenConfig cfg;
    cfg.kind = RuleKind::membership;
    cfg.max_premise = max_premise;
    return run_generation(t, cfg).rules;
}

ConstraintTable all_different_table(const std::vector<std::string>& vars,
                                    const std::vector<Symbol>& domain) {
    if (vars.size() < 2) throw Error("all_different needs at least two variables");
    const int n = static_cast<int>(vars.size());
    const int d = static_cast<int>(domain.size());
    double space = 1;
    for (int i = 0; i < n; ++i) space *= d;
    if (space > 1e7) throw Error("all_different table too large to enumerate");
    std::vector<std::vector<Symbol>> doms(n, domain);
    std::vector<std::vector<Symbol>> rows;
    std::vector<int> pos(n, 0);
    while (true) {
        bool inj = true;
        for (int i = 0; i < n && inj; ++i)
            for (int j = i + 1; j < n && inj; ++j)
                if (pos[i] == pos[j]) inj = false;
        if (inj) {
            std::vector<Symbol> r(n);
            for (int i = 0; i < n; ++i) r[i] = domain[pos[i]];
            rows.push_back(std::move(r));
        }
        int i = n - 1;
        while (i >= 0 && pos[i] + 1 == d) pos[i--] = 0;
        if (i < 0) break;
        pos[i]++;
    }
    return make_table("all_different", vars, std::move(doms), rows);
}

RuleSet all_different_rules(const std::vector<std::string>& vars,
                            const std::vector<Symbol>& domain) {
    if (vars.size() < 2) throw Error("all_different needs at least two variables");
    RuleSet rs;
    rs.table = "all_different";
    rs.kind = RuleKind::equality;
    rs.vars = vars;
    const int n = static_cast<int>(vars.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            for (Symbol a : domain) {
                Rule r;
                r.premise.push_back({i, {a}});
                r.concl_var = j;
                r.concl_value = a;
                rs.rules.push_back(std::move(r));
            }
        }
    canonicalize(rs, all_different_table(vars, domain));
    return rs;
}

std::vector<Assignment> enumerate_assignments(const ConstraintTable& t,
                                              const std::vector<int>& x) {
    Work w(t, false);
    std::vector<Assignment> out;
    for (const Row& p : distinct_projections(w, x)) {
        Assignment a;
        a.vars = x;
        for (size_t i = 0; i < x.size(); ++i) a.values.push_back(t.domains[x[i]].values[p[i]]);
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<WeakAssignment> enumerate_weak_assignments(const ConstraintTable& t,
                                                       const std::vector<int>& x) {
    Work w(t, true);
    std::vector<WeakAssignment> out;
    if (x.empty()) {
        out.push_back({{}, {}});
        return out;
    }
    std::vector<int> maxs(x.size());
    int max_total = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        maxs[i] = popcount(w.col[x[i]]);
        max_total += maxs[i];
    }
    std::vector<Bits> sets(x.size());
    for (int total = max_total; total >= static_cast<int>(x.size()); --total) {
        for (const auto& comp : compositions(total, maxs)) {
            auto rec = [&](auto&& self, size_t i, const RowMask& rows) -> void {
                if (i == x.size()) {
                    WeakAssignment wa;
                    wa.vars = x;
                    for (size_t j = 0; j < x.size(); ++j)
                        wa.sets.push_back(t.domains[x[j]].symbols_of(sets[j]));
                    out.push_back(std::move(wa));
                    return;
                }
                for (Bits s : w.by_pop[x[i]][comp[i]]) {
                    RowMask next(w.words);
                    if (i == 0)
                        next = w.rows_of[x[0]][s];
                    else
                        RowMask::and_into(next, rows, w.rows_of[x[i]][s]);
                    if (next.none()) continue;
                    sets[i] = s;
                    self(self, i + 1, next);
                }
            };
            rec(rec, 0, RowMask(w.words));
        }
    }
    return out;
}

}  // namespace rulesmith
