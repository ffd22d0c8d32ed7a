#include "rulesmith/table.hpp"

#include <algorithm>

namespace rulesmith {

int ConstraintTable::find_var(std::string_view v) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == v) return static_cast<int>(i);
    return -1;
}

Bits ConstraintTable::column(int role) const {
    Bits m = 0;
    for (const Row& r : tuples) m |= bit(r[role]);
    return m;
}

std::vector<Symbol> ConstraintTable::row_symbols(const Row& r) const {
    std::vector<Symbol> out(r.size());
    for (size_t i = 0; i < r.size(); ++i) out[i] = domains[i].values[r[i]];
    return out;
}

bool ConstraintTable::has_row(const Row& r) const {
    return std::binary_search(tuples.begin(), tuples.end(), r);
}

bool ConstraintTable::operator==(const ConstraintTable& o) const {
    return arity() == o.arity() && domains == o.domains && tuples == o.tuples;
}

ConstraintTable make_table(std::string name, std::vector<std::string> vars,
                           std::vector<std::vector<Symbol>> domains,
                           const std::vector<std::vector<Symbol>>& tuples) {
    ConstraintTable t;
    t.name = std::move(name);
    t.vars = std::move(vars);
    if (t.vars.empty()) throw Error("table '" + t.name + "' has no variables");
    if (t.vars.size() != domains.size())
        throw Error("table '" + t.name + "': variable/domain count mismatch");
    for (size_t i = 0; i < t.vars.size(); ++i)
        for (size_t j = i + 1; j < t.vars.size(); ++j)
            if (t.vars[i] == t.vars[j])
                throw Error("table '" + t.name + "': duplicate variable '" + t.vars[i] + "'");
    for (auto& d : domains) {
        if (d.empty()) throw Error("table '" + t.name + "': empty declared domain");
        t.domains.emplace_back(std::move(d));
    }
    t.tuples.reserve(tuples.size());
    for (const auto& row : tuples) {
        if (row.size() != t.vars.size())
            throw Error("table '" + t.name + "': tuple arity mismatch");
        Row r(row.size());
        for (size_t i = 0; i < row.size(); ++i) {
            int idx = t.domains[i].index_of(row[i]);
            if (idx < 0)
                throw Error("table '" + t.name + "': value '" + token(row[i]) +
                            "' outside the domain of " + t.vars[i]);
            r[i] = static_cast<std::uint8_t>(idx);
        }
        t.tuples.push_back(std::move(r));
    }
    std::sort(t.tuples.begin(), t.tuples.end());
    auto dup = std::adjacent_find(t.tuples.begin(), t.tuples.end());
    if (dup != t.tuples.end()) {
        std::string s;
        for (size_t i = 0; i < dup->size(); ++i)
            s += (i ? " " : "") + token(t.domains[i].values[(*dup)[i]]);
        throw Error("table '" + t.name + "': duplicate tuple '" + s + "'");
    }
    return t;
}

Row row_of(const ConstraintTable& t, const std::vector<Symbol>& values) {
    if (static_cast<int>(values.size()) != t.arity()) throw Error("tuple arity mismatch");
    Row r(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        int idx = t.domains[i].index_of(values[i]);
        if (idx < 0) throw Error("value '" + token(values[i]) + "' outside domain");
        r[i] = static_cast<std::uint8_t>(idx);
    }
    return r;
}

std::vector<Symbol> project(std::span<const Symbol> tuple, std::span<const std::string> table_vars,
                            std::span<const std::string> sub) {
    if (tuple.size() != table_vars.size()) throw Error("project: tuple arity mismatch");
    std::vector<Symbol> out;
    out.reserve(sub.size());
    for (const auto& v : sub) {
        auto it = std::find(table_vars.begin(), table_vars.end(), v);
        if (it == table_vars.end()) throw Error("project: unknown variable '" + v + "'");
        out.push_back(tuple[it - table_vars.begin()]);
    }
    return out;
}

ConstraintTable permute(const ConstraintTable& t, const std::vector<int>& pi) {
    const int n = t.arity();
    if (static_cast<int>(pi.size()) != n) throw Error("permute: wrong permutation size");
    std::vector<bool> seen(n, false);
    for (int p : pi) {
        if (p < 0 || p >= n || seen[p]) throw Error("permute: not a bijection");
        seen[p] = true;
    }
    ConstraintTable out;
    out.name = t.name;
    out.vars.resize(n);
    out.domains.resize(n);
    for (int j = 0; j < n; ++j) {
        out.vars[pi[j]] = t.vars[j];
        out.domains[pi[j]] = t.domains[j];
    }
    out.tuples.reserve(t.tuples.size());
    for (const Row& r : t.tuples) {
        Row nr(n);
        for (int j = 0; j < n; ++j) nr[pi[j]] = r[j];
        out.tuples.push_back(std::move(nr));
    }
    std::sort(out.tuples.begin(), out.tuples.end());
    return out;
}

ConstraintTable restrict_table(const ConstraintTable& t,
                               const std::vector<std::vector<Symbol>>& new_domains) {
    const int n = t.arity();
    if (static_cast<int>(new_domains.size()) != n) throw Error("restrict: wrong domain count");
    ConstraintTable out;
    out.name = t.name;
    out.vars = t.vars;
    out.domains.reserve(n);
    std::vector<Bits> keep(n);
    for (int i = 0; i < n; ++i) {
        keep[i] = t.domains[i].mask_of(new_domains[i]);  // throws on values outside the old domain
        out.domains.emplace_back(new_domains[i]);
    }
    for (const Row& r : t.tuples) {
        bool in = true;
        for (int i = 0; i < n && in; ++i) in = has_bit(keep[i], r[i]);
        if (!in) continue;
        Row nr(n);
        for (int i = 0; i < n; ++i)
            nr[i] = static_cast<std::uint8_t>(out.domains[i].index_of(t.domains[i].values[r[i]]));
        out.tuples.push_back(std::move(nr));
    }
    std::sort(out.tuples.begin(), out.tuples.end());
    return out;
}

bool is_based_on(const ConstraintTable& c, const ConstraintTable& e) {
    if (c.arity() != e.arity()) throw Error("is_based_on: arity mismatch");
    std::vector<std::vector<Symbol>> doms;
    for (int i = 0; i < c.arity(); ++i) {
        for (Symbol s : c.domains[i].values)
            if (e.domains[i].index_of(s) < 0) return false;
        doms.push_back(c.domains[i].values);
    }
    return restrict_table(e, doms) == c;
}

bool satisfies(std::span<const Symbol> tuple, std::span<const std::string> vars,
               const AtomicFormula& a) {
    auto it = std::find(vars.begin(), vars.end(), a.var);
    if (it == vars.end()) throw Error("satisfies: unknown variable '" + a.var + "'");
    Symbol v = tuple[it - vars.begin()];
    switch (a.kind) {
        case AtomKind::equals: return v == a.payload.at(0);
        case AtomKind::not_equals: return v != a.payload.at(0);
        case AtomKind::member_of:
            return std::find(a.payload.begin(), a.payload.end(), v) != a.payload.end();
    }
    return false;
}

}  // namespace rulesmith
