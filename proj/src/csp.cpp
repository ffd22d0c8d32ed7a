#include "rulesmith/csp.hpp"

#include <algorithm>

namespace rulesmith {

int Csp::find_var(std::string_view name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return static_cast<int>(i);
    return -1;
}

bool Csp::failed() const {
    for (const auto& v : vars)
        if (v.domain == 0) return true;
    return false;
}

std::vector<Bits> Csp::domain_vector() const {
    std::vector<Bits> out(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) out[i] = vars[i].domain;
    return out;
}

Csp make_csp(const std::vector<std::pair<std::string, std::vector<Symbol>>>& vars) {
    Csp csp;
    for (const auto& [name, values] : vars) {
        if (csp.find_var(name) >= 0) throw Error("duplicate variable '" + name + "'");
        CspVar v;
        v.name = name;
        v.decl = DomainDecl(values);
        v.domain = v.decl.full();
        csp.vars.push_back(std::move(v));
    }
    return csp;
}

void add_instance(Csp& csp, TablePtr table, const std::vector<std::string>& args) {
    if (!table) throw Error("null table");
    if (static_cast<int>(args.size()) != table->arity())
        throw Error("instance of '" + table->name + "': expected " +
                    std::to_string(table->arity()) + " arguments, got " +
                    std::to_string(args.size()));
    ConstraintInstance inst;
    inst.base = std::move(table);
    for (int r = 0; r < inst.base->arity(); ++r) {
        int vi = csp.find_var(args[r]);
        if (vi < 0)
            throw Error("instance of '" + inst.base->name + "': unknown variable '" + args[r] + "'");
        const DomainDecl& vd = csp.vars[vi].decl;
        const DomainDecl& rd = inst.base->domains[r];
        std::vector<std::uint8_t> map(vd.size());
        for (int j = 0; j < vd.size(); ++j) {
            int k = rd.index_of(vd.values[j]);
            if (k < 0)
                throw Error("instance of '" + inst.base->name + "': value '" +
                            token(vd.values[j]) + "' of " + args[r] +
                            " is outside the base domain of role " + inst.base->vars[r]);
            map[j] = static_cast<std::uint8_t>(k);
        }
        inst.binding.push_back(vi);
        inst.role_index.push_back(std::move(map));
    }
    csp.instances.push_back(std::move(inst));
}

Csp with_domains(const Csp& csp, std::vector<Bits> domains) {
    if (domains.size() != csp.vars.size()) throw Error("with_domains: size mismatch");
    Csp out = csp;
    for (size_t i = 0; i < domains.size(); ++i) {
        if (!is_subset(domains[i], out.vars[i].decl.full()))
            throw Error("with_domains: domain outside declaration");
        out.vars[i].domain = domains[i];
    }
    return out;
}

Csp restrict_csp(const Csp& csp,
                 const std::vector<std::pair<std::string, std::vector<Symbol>>>& new_domains) {
    std::vector<Bits> doms = csp.domain_vector();
    for (const auto& [name, values] : new_domains) {
        int vi = csp.find_var(name);
        if (vi < 0) throw Error("restrict: unknown variable '" + name + "'");
        Bits m = csp.vars[vi].decl.mask_of(values);
        if (!is_subset(m, doms[vi])) throw Error("restrict: not a subset of the current domain");
        doms[vi] = m;
    }
    return with_domains(csp, std::move(doms));
}

double search_space(const Csp& csp) {
    double p = 1;
    for (const auto& v : csp.vars) p *= popcount(v.domain);
    return p;
}

namespace {

// Checks one full assignment (value indices into each var's decl) against an instance.
bool instance_allows(const ConstraintInstance& inst, const std::vector<int>& assign) {
    Row r(inst.binding.size());
    for (size_t role = 0; role < inst.binding.size(); ++role)
        r[role] = inst.role_index[role][assign[inst.binding[role]]];
    return inst.base->has_row(r);
}

}  // namespace

std::vector<std::vector<Symbol>> solutions(const Csp& csp, double cap) {
    std::vector<std::vector<Symbol>> out;
    if (csp.failed()) return out;
    if (search_space(csp) > cap) throw Error("solutions: search space too large for enumeration");

    const int n = static_cast<int>(csp.vars.size());
    std::vector<std::vector<int>> choices(n);
    for (int i = 0; i < n; ++i)
        for_bits(csp.vars[i].domain, [&](int b) { choices[i].push_back(b); });

    std::vector<int> pos(n, 0), assign(n);
    while (true) {
        for (int i = 0; i < n; ++i) assign[i] = choices[i][pos[i]];
        bool ok = true;
        for (const auto& inst : csp.instances)
            if (!instance_allows(inst, assign)) {
                ok = false;
                break;
            }
        if (ok) {
            std::vector<Symbol> sol(n);
            for (int i = 0; i < n; ++i) sol[i] = csp.vars[i].decl.values[assign[i]];
            out.push_back(std::move(sol));
        }
        int i = n - 1;
        while (i >= 0 && pos[i] + 1 == static_cast<int>(choices[i].size())) pos[i--] = 0;
        if (i < 0) break;
        pos[i]++;
    }
    return out;
}

bool csp_equivalent(const Csp& a, const Csp& b) {
    if (a.vars.size() != b.vars.size()) throw Error("csp_equivalent: variable sequences differ");
    for (size_t i = 0; i < a.vars.size(); ++i)
        if (a.vars[i].name != b.vars[i].name)
            throw Error("csp_equivalent: variable sequences differ");
    auto sa = solutions(a);
    auto sb = solutions(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa == sb;
}

ConstraintTable materialize(const Csp& csp, const std::vector<std::string>& interface_vars,
                            std::string name) {
    if (interface_vars.empty()) throw Error("materialize: empty interface");
    std::vector<int> idx;
    for (const auto& v : interface_vars) {
        int i = csp.find_var(v);
        if (i < 0) throw Error("materialize: unknown variable '" + v + "'");
        idx.push_back(i);
    }
    std::vector<std::vector<Symbol>> doms;
    for (int i : idx) doms.push_back(csp.vars[i].decl.values);
    std::vector<std::vector<Symbol>> rows;
    for (const auto& sol : solutions(csp)) {
        std::vector<Symbol> r;
        r.reserve(idx.size());
        for (int i : idx) r.push_back(sol[i]);
        rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return make_table(std::move(name), interface_vars, std::move(doms), rows);
}

}  // namespace rulesmith
