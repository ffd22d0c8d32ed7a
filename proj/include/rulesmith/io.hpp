#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rulesmith/csp.hpp"
#include "rulesmith/rules.hpp"

namespace rulesmith {

using TableResolver = std::function<TablePtr(const std::string&)>;

/// `.ct` text (line-oriented, `#` comments). `origin` prefixes error messages.
ConstraintTable parse_table(std::string_view text, const std::string& origin = "<text>");
std::string write_table(const ConstraintTable& t);

struct CspFile {
    Csp csp;
    std::vector<std::string> rules_files;  // optional `rules <path>` directives
};

/// `.csp` text: `var` lines, `use` lines, optional `rules` lines.
CspFile parse_csp(std::string_view text, const TableResolver& resolve,
                  const std::string& origin = "<text>");

/// Extension-dispatched loaders; `.json` selects the JSON mirror format.
ConstraintTable load_table(const std::string& path);
CspFile load_csp(const std::string& path, const TableResolver& resolve);
RuleSet load_rules(const std::string& path, const ConstraintTable& t);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace rulesmith
