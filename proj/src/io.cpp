#include "rulesmith/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rulesmith/chr.hpp"

namespace rulesmith {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw Error(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> words(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

struct Lines {
    std::vector<std::pair<int, std::string>> items;  // (lineno, stripped non-empty line)
    explicit Lines(std::string_view text) {
        int no = 0;
        size_t pos = 0;
        std::string buf(text);
        while (pos <= buf.size()) {
            size_t eol = buf.find('\n', pos);
            std::string line =
                buf.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
            pos = eol == std::string::npos ? buf.size() + 1 : eol + 1;
            no++;
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            auto ws = words(line);
            if (ws.empty()) continue;
            std::string joined;
            for (size_t i = 0; i < ws.size(); ++i) joined += (i ? " " : "") + ws[i];
            items.emplace_back(no, joined);
        }
    }
};

ConstraintTable parse_table_json(const std::string& text, const std::string& origin) {
    auto j = nlohmann::json::parse(text);
    std::string name = j.at("constraint").get<std::string>();
    std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
    std::vector<std::vector<Symbol>> domains;
    for (const auto& v : vars) {
        auto toks = j.at("domains").at(v).get<std::vector<std::string>>();
        domains.push_back(intern_all(toks));
    }
    std::vector<std::vector<Symbol>> tuples;
    for (const auto& row : j.at("tuples"))
        tuples.push_back(intern_all(row.get<std::vector<std::string>>()));
    try {
        return make_table(std::move(name), std::move(vars), std::move(domains), tuples);
    } catch (const Error& e) {
        throw Error(origin + ": " + e.what());
    }
}

CspFile parse_csp_json(const std::string& text, const TableResolver& resolve,
                       const std::string& origin) {
    auto j = nlohmann::json::parse(text);
    CspFile out;
    std::vector<std::pair<std::string, std::vector<Symbol>>> vars;
    for (const auto& v : j.at("vars"))
        vars.emplace_back(v.at("name").get<std::string>(),
                          intern_all(v.at("domain").get<std::vector<std::string>>()));
    try {
        out.csp = make_csp(vars);
        for (const auto& u : j.at("uses")) {
            std::string name = u.at("table").get<std::string>();
            TablePtr t = resolve(name);
            if (!t) throw Error("unknown table '" + name + "'");
            add_instance(out.csp, t, u.at("args").get<std::vector<std::string>>());
        }
        if (j.contains("rules"))
            out.rules_files = j.at("rules").get<std::vector<std::string>>();
    } catch (const Error& e) {
        throw Error(origin + ": " + e.what());
    }
    return out;
}

}  // namespace

ConstraintTable parse_table(std::string_view text, const std::string& origin) {
    Lines lines(text);
    size_t i = 0;
    auto need = [&](const char* what) -> std::pair<int, std::vector<std::string>> {
        if (i >= lines.items.size())
            throw Error(origin + ": unexpected end of file, expected " + std::string(what));
        auto& [no, line] = lines.items[i++];
        return {no, words(line)};
    };

    auto [no0, w0] = need("'constraint <name>'");
    if (w0.size() != 2 || w0[0] != "constraint") fail(origin, no0, "expected 'constraint <name>'");
    std::string name = w0[1];

    auto [no1, w1] = need("'vars ...'");
    if (w1.size() < 2 || w1[0] != "vars") fail(origin, no1, "expected 'vars <v1> <v2> ...'");
    std::vector<std::string> vars(w1.begin() + 1, w1.end());

    std::vector<std::vector<Symbol>> domains(vars.size());
    std::vector<bool> have(vars.size(), false);
    for (size_t k = 0; k < vars.size(); ++k) {
        auto [no, w] = need("'domain <var> <values...>'");
        if (w.size() < 3 || w[0] != "domain") fail(origin, no, "expected 'domain <var> <values...>'");
        auto it = std::find(vars.begin(), vars.end(), w[1]);
        if (it == vars.end()) fail(origin, no, "unknown variable '" + w[1] + "'");
        size_t vi = it - vars.begin();
        if (have[vi]) fail(origin, no, "duplicate domain for '" + w[1] + "'");
        have[vi] = true;
        domains[vi] = intern_all({w.begin() + 2, w.end()});
    }

    auto [no2, w2] = need("'tuples'");
    if (w2.size() != 1 || w2[0] != "tuples") fail(origin, no2, "expected 'tuples'");

    std::vector<std::vector<Symbol>> tuples;
    while (true) {
        auto [no, w] = need("tuple row or 'end'");
        if (w.size() == 1 && w[0] == "end") break;
        if (w.size() != vars.size())
            fail(origin, no, "expected " + std::to_string(vars.size()) + " values");
        tuples.push_back(intern_all(w));
    }
    if (i != lines.items.size())
        fail(origin, lines.items[i].first, "trailing content after 'end'");
    try {
        return make_table(std::move(name), std::move(vars), std::move(domains), tuples);
    } catch (const Error& e) {
        throw Error(origin + ": " + e.what());
    }
}

std::string write_table(const ConstraintTable& t) {
    std::string out = "constraint " + t.name + "\nvars";
    for (const auto& v : t.vars) out += " " + v;
    out += "\n";
    for (int i = 0; i < t.arity(); ++i) {
        out += "domain " + t.vars[i];
        for (Symbol s : t.domains[i].values) out += " " + token(s);
        out += "\n";
    }
    out += "tuples\n";
    for (const Row& r : t.tuples) {
        for (size_t i = 0; i < r.size(); ++i)
            out += (i ? " " : "") + token(t.domains[i].values[r[i]]);
        out += "\n";
    }
    out += "end\n";
    return out;
}

CspFile parse_csp(std::string_view text, const TableResolver& resolve,
                  const std::string& origin) {
    CspFile out;
    std::vector<std::pair<std::string, std::vector<Symbol>>> vars;
    struct Use {
        int line;
        std::string table;
        std::vector<std::string> args;
    };
    std::vector<Use> uses;

    for (const auto& [no, line] : Lines(text).items) {
        auto w = words(line);
        if (w[0] == "var") {
            if (w.size() < 3) fail(origin, no, "expected 'var <name> <values...>'");
            vars.emplace_back(w[1], intern_all({w.begin() + 2, w.end()}));
        } else if (w[0] == "use") {
            std::string rest;
            for (size_t i = 1; i < w.size(); ++i) rest += w[i];
            size_t open = rest.find('(');
            size_t close = rest.rfind(')');
            if (open == std::string::npos || close == std::string::npos || close < open)
                fail(origin, no, "expected 'use <table>(<v1>,<v2>,...)'");
            Use u;
            u.line = no;
            u.table = rest.substr(0, open);
            std::string inner = rest.substr(open + 1, close - open - 1);
            std::string cur;
            for (char c : inner + ",") {
                if (c == ',') {
                    if (cur.empty()) fail(origin, no, "empty argument");
                    u.args.push_back(cur);
                    cur.clear();
                } else if (!std::isspace(static_cast<unsigned char>(c))) {
                    cur += c;
                }
            }
            uses.push_back(std::move(u));
        } else if (w[0] == "rules") {
            if (w.size() != 2) fail(origin, no, "expected 'rules <path>'");
            out.rules_files.push_back(w[1]);
        } else {
            fail(origin, no, "expected 'var', 'use' or 'rules'");
        }
    }
    try {
        out.csp = make_csp(vars);
    } catch (const Error& e) {
        throw Error(origin + ": " + e.what());
    }
    for (const auto& u : uses) {
        TablePtr t = resolve(u.table);
        if (!t) fail(origin, u.line, "unknown table '" + u.table + "'");
        try {
            add_instance(out.csp, t, u.args);
        } catch (const Error& e) {
            fail(origin, u.line, e.what());
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

namespace {

bool has_ext(const std::string& path, const char* ext) {
    std::string e(ext);
    return path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0;
}

}  // namespace

ConstraintTable load_table(const std::string& path) {
    std::string text = read_file(path);
    if (has_ext(path, ".json")) return parse_table_json(text, path);
    return parse_table(text, path);
}

CspFile load_csp(const std::string& path, const TableResolver& resolve) {
    std::string text = read_file(path);
    if (has_ext(path, ".json")) return parse_csp_json(text, resolve, path);
    return parse_csp(text, resolve, path);
}

RuleSet load_rules(const std::string& path, const ConstraintTable& t) {
    try {
        return parse_rules(read_file(path), t);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

}  // namespace rulesmith
