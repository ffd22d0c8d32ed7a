#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "rulesmith/chr.hpp"
#include "rulesmith/corpus.hpp"
#include "rulesmith/generate.hpp"

using namespace rulesmith;

namespace {

std::vector<std::string> chr_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '%' && line.find(":-") == std::string::npos)
            out.push_back(line);
    return out;
}

// renames variable letters to V1, V2, ... in order of first occurrence, so
// lines can be compared up to the letter assignment
std::string normalize_letters(const std::string& line) {
    std::map<char, std::string> ren;
    std::string out;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        bool boundary_before = i == 0 || !std::isalnum(static_cast<unsigned char>(line[i - 1]));
        bool boundary_after =
            i + 1 == line.size() || !std::isalnum(static_cast<unsigned char>(line[i + 1]));
        if (c >= 'A' && c <= 'Z' && boundary_before && boundary_after) {
            auto it = ren.find(c);
            if (it == ren.end())
                it = ren.emplace(c, "V" + std::to_string(ren.size() + 1)).first;
            out += it->second;
        } else {
            out += c;
        }
    }
    return out;
}

std::set<std::string> normalized_set(const std::vector<std::string>& lines) {
    std::set<std::string> out;
    for (const auto& l : lines) out.insert(normalize_letters(l));
    return out;
}

}  // namespace

TEST_CASE("the six conjunction propagation rules") {
    TablePtr and_t = corpus_table("and");
    RuleSet eq = generate_equality_rules(*and_t);
    std::string chr = to_chr(eq, *and_t);
    auto lines = chr_lines(chr);
    REQUIRE(lines.size() == 6);
    std::set<std::string> published = normalized_set({
        "and(1,1,X) ==> X##0.",
        "and(X,0,Y) ==> Y##1.",
        "and(0,X,Y) ==> Y##1.",
        "and(X,Y,1) ==> X##0,Y##0.",
        "and(1,X,0) ==> X##1.",
        "and(X,1,0) ==> X##1.",
    });
    CHECK(normalized_set(lines) == published);
    CHECK(chr.find("in(") == std::string::npos);  // no guards, no preamble definition
}

TEST_CASE("membership rules carry in/2 guards") {
    TablePtr msign = corpus_table("msign");
    RuleSet mem = generate_membership_rules(*msign);
    std::string chr = to_chr(mem, *msign);
    CHECK(chr.find("in(X,L):- dom(X,D), subset(D,L).") != std::string::npos);
    // the sign-propagation example: msign(X,unk,Y) guarded on Y
    CHECK(chr.find("msign(A,unk,C) ==> in(C,[neg, zero, pos]) | A##neg,A##pos.") !=
          std::string::npos);

    TablePtr equiv = corpus_table("equiv");
    std::string echr = to_chr(generate_membership_rules(*equiv), *equiv);
    CHECK(echr.find("equiv(t,B,C) ==> in(C,[f, u]) | B##t.") != std::string::npos);

    TablePtr and3 = corpus_table("and3");
    std::string a3 = to_chr(generate_membership_rules(*and3), *and3);
    CHECK(a3.find("and3(A,B,C) ==> in(A,[0, u]) | C##1.") != std::string::npos);
}

TEST_CASE("junction values are quoted for CHR") {
    TablePtr t = corpus_table("t");
    RuleSet eq = generate_equality_rules(*t);
    std::string chr = to_chr(eq, *t);
    auto lines = chr_lines(chr);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0] ==
          "t(A,B,C) ==> A##'+',A##'-',A##'l',B##'+',B##'-',B##'r'.");
}

TEST_CASE("an empty rule set emits only the preamble comment") {
    TablePtr or_t = corpus_table("or");
    RuleSet empty;
    empty.table = "or";
    empty.kind = RuleKind::membership;
    empty.vars = or_t->vars;
    std::string chr = to_chr(empty, *or_t);
    CHECK(chr == "% membership rules for or\n");
}

TEST_CASE("emission line count equals the grouped rule count") {
    for (const char* name : {"and", "fork", "equiv", "msign", "t", "and6"}) {
        TablePtr t = corpus_table(name);
        for (RuleKind kind : {RuleKind::equality, RuleKind::membership}) {
            RuleSet rs = kind == RuleKind::equality ? generate_equality_rules(*t)
                                                    : generate_membership_rules(*t);
            CHECK(chr_lines(to_chr(rs, *t)).size() == group_by_premise(rs).size());
        }
    }
}

TEST_CASE("distinct rule sets emit distinct text") {
    std::set<std::string> seen;
    for (const char* name : {"and", "or", "xor", "fork", "equiv", "msign"}) {
        TablePtr t = corpus_table(name);
        for (RuleKind kind : {RuleKind::equality, RuleKind::membership}) {
            RuleSet rs = kind == RuleKind::equality ? generate_equality_rules(*t)
                                                    : generate_membership_rules(*t);
            CHECK(seen.insert(to_chr(rs, *t)).second);
        }
    }
}

TEST_CASE("parse_rules round-trips every generated corpus rule set") {
    for (const char* name : {"and", "not", "not_3", "fork", "t", "line", "equiv", "msign",
                             "and3", "and4", "and6", "full_adder", "nonarc"}) {
        TablePtr t = corpus_table(name);
        for (RuleKind kind : {RuleKind::equality, RuleKind::membership}) {
            RuleSet rs = kind == RuleKind::equality ? generate_equality_rules(*t)
                                                    : generate_membership_rules(*t);
            RuleSet back = parse_rules(to_text(rs), *t);
            CHECK(back == rs);
        }
    }
}

TEST_CASE("parse_rules reads the conjunction example") {
    TablePtr and_t = corpus_table("and");
    RuleSet rs = parse_rules("table and\nkind equality\nx=0 -> z != 1\n", *and_t);
    REQUIRE(rs.rules.size() == 1);
    CHECK(rs.rules[0] == make_rule(*and_t, {{"x", {"0"}}}, "z", "1"));
    CHECK(is_valid(rs.rules[0], *and_t));
}

TEST_CASE("parse_rules reports positioned errors") {
    TablePtr and_t = corpus_table("and");
    auto expect_error = [&](const std::string& text, const std::string& needle) {
        try {
            parse_rules(text, *and_t);
            FAIL("expected a parse error for: " << text);
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("table and\nkind equality\nx=0 z != 1\n", "line 3");
    expect_error("table and\nkind equality\nw=0 -> z != 1\n", "unknown variable");
    expect_error("table and\nkind equality\nx=7 -> z != 1\n", "outside the domain");
    expect_error("table nope\nkind equality\n", "table");
    expect_error("x=0 -> z != 1\n", "header");
    expect_error("table and\nkind equality\nx=0 -> z != 1, x != 0\n", "premise");
}
