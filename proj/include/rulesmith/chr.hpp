#pragma once

#include <string_view>

#include "rulesmith/rules.hpp"

namespace rulesmith {

/// CHR propagation-rule rendering of a grouped rule set. One line per group:
/// `name(p1,...,pn) ==> guards | c1,...,ck.` with position letters A, B, ...
/// Singleton premise sets inline as head constants; proper subsets guard via
/// in/2; sets equal to the declared domain leave the position free.
std::string to_chr(const RuleSet& rs, const ConstraintTable& t);

/// Parses canonical `.rules` text (table/kind headers, one grouped rule per
/// line) against the named table. Errors carry 1-based line numbers.
RuleSet parse_rules(std::string_view text, const ConstraintTable& t);

}  // namespace rulesmith
