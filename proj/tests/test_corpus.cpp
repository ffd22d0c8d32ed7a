#include <doctest.h>

#include "rulesmith/corpus.hpp"
#include "rulesmith/generate.hpp"

using namespace rulesmith;

namespace {

std::vector<Symbol> sv(const std::vector<std::string>& toks) { return intern_all(toks); }

}  // namespace

TEST_CASE("shipped cardinalities match the catalog") {
    for (const auto& info : corpus_catalog()) {
        if (!info.cardinality) continue;
        TablePtr t = corpus_table(info.name);
        CHECK_MESSAGE(static_cast<int>(t->tuples.size()) == *info.cardinality,
                      "cardinality of ", info.name);
    }
}

TEST_CASE("shipped tables equal their builders") {
    for (const auto& info : corpus_catalog()) {
        TablePtr shipped = corpus_table(info.name);
        ConstraintTable built = build_table(info.name);
        CHECK_MESSAGE(*shipped == built, "table ", info.name);
    }
}

TEST_CASE("the six-valued table has no tuple for blank cells") {
    TablePtr t = corpus_table("and6");
    CHECK(t->tuples.size() == 24);
    auto absent = [&](const char* a, const char* b) {
        for (const Row& r : t->tuples) {
            auto s = t->row_symbols(r);
            if (s[0] == intern(a) && s[1] == intern(b)) return false;
        }
        return true;
    };
    CHECK(absent("0", "d"));
    CHECK(absent("0", "dnot"));
    CHECK(absent("d", "0"));
    CHECK(absent("d", "d"));
    CHECK(absent("dnot", "e"));
    CHECK_FALSE(absent("1", "d"));
}

TEST_CASE("the conjunction table is the printed one") {
    TablePtr t = corpus_table("and");
    CHECK(t->tuples.size() == 4);
    CHECK(t->has_row(row_of(*t, sv({"1", "1", "1"}))));
    CHECK(t->has_row(row_of(*t, sv({"0", "1", "0"}))));
    CHECK_FALSE(t->has_row(row_of(*t, sv({"1", "1", "0"}))));
}

TEST_CASE("the temporal composition table") {
    TablePtr t = corpus_table("allen");
    CHECK(t->tuples.size() == 409);
    // A overlaps B and B before C implies A before C
    CHECK(t->has_row(row_of(*t, sv({"o", "b", "b"}))));
    // composing with equality is the identity
    for (std::string r : {"b", "d", "o", "m", "s", "f"}) {
        CHECK(t->has_row(row_of(*t, sv({r, "e", r}))));
        CHECK(t->has_row(row_of(*t, sv({"e", r, r}))));
        for (std::string other : {"b", "d", "o"})
            if (other != r) CHECK_FALSE(t->has_row(row_of(*t, sv({r, "e", other}))));
    }
}

TEST_CASE("the full adder fixture equals its materialization") {
    TablePtr shipped = corpus_table("full_adder");
    ConstraintTable built =
        materialize(build_adder_csp(), {"i1", "i2", "i3", "o1", "o2"}, "full_adder");
    CHECK(*shipped == built);
    CHECK(shipped->tuples.size() == 8);
    CHECK(shipped->has_row(row_of(*shipped, sv({"1", "0", "1", "1", "0"}))));
}

TEST_CASE("the multiplication table satisfies its defining identity") {
    TablePtr t = corpus_table("b10m");
    CHECK(t->tuples.size() == 100);
    for (const Row& r : t->tuples) {
        auto s = t->row_symbols(r);
        int x = std::stoi(token(s[0])), y = std::stoi(token(s[1]));
        int c = std::stoi(token(s[2])), z = std::stoi(token(s[3]));
        CHECK(x * y == z + 10 * c);
    }
}

TEST_CASE("unknown corpus names are rejected") {
    CHECK_THROWS_AS(corpus_table("nope"), Error);
    CHECK_THROWS_AS(build_table("nope"), Error);
    CHECK(corpus_resolver()("nope") == nullptr);
}

TEST_CASE("puzzle fixture wiring") {
    Fixture f = corpus_fixture("puzzle");
    CHECK(f.csp.vars.size() == 9);
    CHECK(f.csp.instances.size() == 1);
    REQUIRE(f.rules.size() == 1);
    CHECK(f.rules[0].table == "puzzle");
    CHECK(f.rules[0].kind == RuleKind::equality);
    CHECK(f.rules[0].rules.size() == 52);

    RuleSet built = build_puzzle_rules(*corpus_table("puzzle"));
    CHECK(f.rules[0] == built);
}
