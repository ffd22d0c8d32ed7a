#include "rulesmith/chr.hpp"

#include <algorithm>
#include <cctype>

namespace rulesmith {

namespace {

bool plain_atom_token(const std::string& s) {
    if (s.empty()) return false;
    if (std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        return true;
    if (!std::islower(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin() + 1, s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

std::string chr_value(Symbol s) {
    const std::string& t = token(s);
    return plain_atom_token(t) ? t : "'" + t + "'";
}

std::string position_letter(int i) { return std::string(1, static_cast<char>('A' + i)); }

}  // namespace

std::string to_chr(const RuleSet& rs, const ConstraintTable& t) {
    if (rs.table != t.name) throw Error("to_chr: rule set is for table '" + rs.table + "'");
    auto grouped = group_by_premise(rs);

    std::string out = "% ";
    out += rs.kind == RuleKind::equality ? "equality" : "membership";
    out += " rules for " + t.name + "\n";

    std::vector<std::string> lines;
    bool any_guard = false;
    for (const auto& g : grouped) {
        std::string head = t.name + "(";
        std::string guards;
        for (int pos = 0; pos < t.arity(); ++pos) {
            const PremiseAtom* a = nullptr;
            for (const auto& pa : g.premise)
                if (pa.var == pos) a = &pa;
            std::string arg;
            if (a && a->values.size() == 1) {
                arg = chr_value(a->values[0]);
            } else {
                arg = position_letter(pos);
                if (a && a->values.size() != t.domains[pos].values.size()) {
                    if (!guards.empty()) guards += ", ";
                    guards += "in(" + arg + ",[";
                    for (size_t i = 0; i < a->values.size(); ++i)
                        guards += (i ? ", " : "") + chr_value(a->values[i]);
                    guards += "])";
                }
            }
            head += (pos ? "," : "") + arg;
        }
        head += ")";
        std::string body;
        for (size_t i = 0; i < g.conclusions.size(); ++i) {
            if (i) body += ",";
            body += position_letter(g.conclusions[i].first) + "##" +
                    chr_value(g.conclusions[i].second);
        }
        if (!guards.empty()) any_guard = true;
        lines.push_back(head + " ==> " + (guards.empty() ? body : guards + " | " + body) + ".");
    }
    if (any_guard) out += "in(X,L):- dom(X,D), subset(D,L).\n";
    for (const auto& l : lines) out += l + "\n";
    return out;
}

namespace {

struct LineError : Error {
    using Error::Error;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw Error("line " + std::to_string(line) + ": " + msg);
}

std::string trim(std::string s) {
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

// splits on top-level commas (commas inside {...} do not split)
std::vector<std::string> split_top(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '{') depth++;
        if (c == '}') depth--;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace

RuleSet parse_rules(std::string_view text, const ConstraintTable& t) {
    RuleSet rs;
    rs.vars = t.vars;
    bool saw_table = false, saw_kind = false;

    std::string buf(text);
    size_t pos = 0;
    int lineno = 0;
    while (pos <= buf.size()) {
        size_t eol = buf.find('\n', pos);
        std::string line = buf.substr(pos, eol == std::string::npos ? std::string::npos
                                                                    : eol - pos);
        pos = eol == std::string::npos ? buf.size() + 1 : eol + 1;
        lineno++;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;

        if (line.rfind("table ", 0) == 0) {
            std::string name = trim(line.substr(6));
            if (name != t.name)
                fail(lineno, "rules are for table '" + name + "', expected '" + t.name + "'");
            saw_table = true;
            continue;
        }
        if (line.rfind("kind ", 0) == 0) {
            std::string k = trim(line.substr(5));
            if (k == "equality")
                rs.kind = RuleKind::equality;
            else if (k == "membership")
                rs.kind = RuleKind::membership;
            else
                fail(lineno, "unknown kind '" + k + "'");
            saw_kind = true;
            continue;
        }
        if (!saw_table || !saw_kind) fail(lineno, "expected 'table' and 'kind' header lines first");

        size_t arrow = line.find("->");
        if (arrow == std::string::npos) fail(lineno, "missing '->'");
        std::string lhs = trim(line.substr(0, arrow));
        std::string rhs = trim(line.substr(arrow + 2));
        if (rhs.empty()) fail(lineno, "empty conclusion");

        std::vector<PremiseAtom> premise;
        if (lhs != "true") {
            for (const std::string& atom : split_top(lhs)) {
                PremiseAtom a;
                size_t in_pos = atom.find(" in ");
                size_t eq_pos = atom.find('=');
                std::string var;
                if (in_pos != std::string::npos && atom.find('{') != std::string::npos) {
                    if (rs.kind != RuleKind::membership)
                        fail(lineno, "membership atom in an equality rule set");
                    var = trim(atom.substr(0, in_pos));
                    size_t open = atom.find('{'), close = atom.find('}');
                    if (close == std::string::npos || close < open)
                        fail(lineno, "malformed set in '" + atom + "'");
                    std::string inner = atom.substr(open + 1, close - open - 1);
                    for (const std::string& v : split_top(inner)) {
                        if (v.empty()) fail(lineno, "empty value in set");
                        a.values.push_back(intern(v));
                    }
                } else if (eq_pos != std::string::npos) {
                    if (rs.kind != RuleKind::equality)
                        fail(lineno, "equality atom in a membership rule set");
                    var = trim(atom.substr(0, eq_pos));
                    std::string v = trim(atom.substr(eq_pos + 1));
                    if (v.empty()) fail(lineno, "missing value in '" + atom + "'");
                    a.values.push_back(intern(v));
                } else {
                    fail(lineno, "cannot parse atom '" + atom + "'");
                }
                a.var = t.find_var(var);
                if (a.var < 0) fail(lineno, "unknown variable '" + var + "'");
                for (Symbol s : a.values)
                    if (t.domains[a.var].index_of(s) < 0)
                        fail(lineno, "value '" + token(s) + "' outside the domain of " + var);
                premise.push_back(std::move(a));
            }
            std::sort(premise.begin(), premise.end(),
                      [](const PremiseAtom& x, const PremiseAtom& y) { return x.var < y.var; });
            for (size_t i = 1; i < premise.size(); ++i)
                if (premise[i].var == premise[i - 1].var)
                    fail(lineno, "repeated premise variable");
        }

        for (const std::string& c : split_top(rhs)) {
            size_t neq = c.find("!=");
            if (neq == std::string::npos) fail(lineno, "conclusion must use '!=' in '" + c + "'");
            std::string var = trim(c.substr(0, neq));
            std::string val = trim(c.substr(neq + 2));
            Rule r;
            r.premise = premise;
            r.concl_var = t.find_var(var);
            if (r.concl_var < 0) fail(lineno, "unknown variable '" + var + "'");
            r.concl_value = intern(val);
            if (t.domains[r.concl_var].index_of(r.concl_value) < 0)
                fail(lineno, "value '" + val + "' outside the domain of " + var);
            for (const auto& a : r.premise)
                if (a.var == r.concl_var)
                    fail(lineno, "conclusion variable occurs in the premise");
            rs.rules.push_back(std::move(r));
        }
    }
    if (!saw_table || !saw_kind) throw Error("missing 'table'/'kind' header lines");
    rs.table = t.name;
    canonicalize(rs, t);
    return rs;
}

}  // namespace rulesmith
