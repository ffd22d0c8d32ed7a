#pragma once

#include <string>
#include <vector>

#include "rulesmith/table.hpp"

namespace rulesmith {

struct CspVar {
    std::string name;
    DomainDecl decl;  // declared domain, fixes printing order and bit layout
    Bits domain = 0;  // current domain, subset of decl.full()
};

/// A constraint occurrence: a base table plus the CSP variables playing its
/// roles. The induced relation is base.tuples intersected with the product of
/// the bound variables' current domains; it is never stored.
struct ConstraintInstance {
    TablePtr base;
    std::vector<int> binding;  // role -> CSP variable index
    // role_index[r][j] = index in role r's domain of the j-th declared value
    // of the bound variable (total: declared var domains are subsets of the
    // role domains, checked at bind time).
    std::vector<std::vector<std::uint8_t>> role_index;
};

struct Csp {
    std::vector<CspVar> vars;
    std::vector<ConstraintInstance> instances;

    int find_var(std::string_view name) const;  // -1 when absent
    bool failed() const;                        // some current domain empty
    std::vector<Bits> domain_vector() const;
};

Csp make_csp(const std::vector<std::pair<std::string, std::vector<Symbol>>>& vars);

/// Binds `table`'s roles to the named CSP variables, in role order.
/// Each bound variable's declared domain must be a subset of its role domain.
void add_instance(Csp& csp, TablePtr table, const std::vector<std::string>& args);

Csp with_domains(const Csp& csp, std::vector<Bits> domains);

/// Restricts current domains; each new domain must be a subset of the old one.
Csp restrict_csp(const Csp& csp,
                 const std::vector<std::pair<std::string, std::vector<Symbol>>>& new_domains);

/// Brute-force solution enumeration over the product of current domains,
/// in declaration order. Throws when the product space exceeds `cap`.
std::vector<std::vector<Symbol>> solutions(const Csp& csp, double cap = 1e8);

double search_space(const Csp& csp);

bool csp_equivalent(const Csp& a, const Csp& b);

/// Truth table of the CSP seen through `interface_vars`: one tuple per
/// distinct projection of a solution.
ConstraintTable materialize(const Csp& csp, const std::vector<std::string>& interface_vars,
                            std::string name);

}  // namespace rulesmith
