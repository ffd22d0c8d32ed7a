#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rulesmith/core.hpp"

namespace rulesmith {

/// One allowed combination, stored as value indices into the per-role domains.
using Row = std::vector<std::uint8_t>;

/// An extensional constraint: named roles, one declared domain per role and
/// an explicit set of allowed tuples.
struct ConstraintTable {
    std::string name;
    std::vector<std::string> vars;
    std::vector<DomainDecl> domains;
    std::vector<Row> tuples;  // sorted lexicographically, duplicate-free

    int arity() const { return static_cast<int>(vars.size()); }
    int find_var(std::string_view v) const;  // -1 when absent
    Bits column(int role) const;             // values that actually occur in some tuple
    std::vector<Symbol> row_symbols(const Row& r) const;
    bool has_row(const Row& r) const;

    /// Semantic equality: arity, per-position domains and tuple sets.
    /// Role names and the table name are labels and do not participate.
    bool operator==(const ConstraintTable& o) const;
};

using TablePtr = std::shared_ptr<const ConstraintTable>;

/// Validates arities, value membership and rejects duplicate tuples.
ConstraintTable make_table(std::string name, std::vector<std::string> vars,
                           std::vector<std::vector<Symbol>> domains,
                           const std::vector<std::vector<Symbol>>& tuples);

Row row_of(const ConstraintTable& t, const std::vector<Symbol>& values);

/// Components of `tuple` at the positions of `sub`, in `sub`'s order.
std::vector<Symbol> project(std::span<const Symbol> tuple, std::span<const std::string> table_vars,
                            std::span<const std::string> sub);

/// Reindexing by a bijection pi (0-based): position pi[j] of the result is
/// position j of the input, so (a_{pi(1)},...,a_{pi(n)}) in t iff a in result.
ConstraintTable permute(const ConstraintTable& t, const std::vector<int>& pi);

/// Same roles, smaller domains, tuples filtered to the new product.
ConstraintTable restrict_table(const ConstraintTable& t,
                               const std::vector<std::vector<Symbol>>& new_domains);

/// c = e intersected with c's (smaller) domains.
bool is_based_on(const ConstraintTable& c, const ConstraintTable& e);

enum class AtomKind { equals, not_equals, member_of };

struct AtomicFormula {
    std::string var;
    AtomKind kind = AtomKind::equals;
    std::vector<Symbol> payload;  // single element for = and !=
};

bool satisfies(std::span<const Symbol> tuple, std::span<const std::string> vars,
               const AtomicFormula& a);

}  // namespace rulesmith
