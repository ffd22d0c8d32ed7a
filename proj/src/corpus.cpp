#include "rulesmith/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>

#include "rulesmith/generate.hpp"

#ifndef RULESMITH_CORPUS_DIR
#define RULESMITH_CORPUS_DIR "corpus"
#endif

namespace rulesmith {

namespace {

std::vector<std::vector<Symbol>> tuples3(const std::vector<std::array<const char*, 3>>& rows) {
    std::vector<std::vector<Symbol>> out;
    for (const auto& r : rows) out.push_back({intern(r[0]), intern(r[1]), intern(r[2])});
    return out;
}

std::vector<std::vector<Symbol>> tuples2(const std::vector<std::array<const char*, 2>>& rows) {
    std::vector<std::vector<Symbol>> out;
    for (const auto& r : rows) out.push_back({intern(r[0]), intern(r[1])});
    return out;
}

std::vector<Symbol> syms(const std::vector<std::string>& toks) { return intern_all(toks); }

}  // namespace

ConstraintTable build_bool_table(const std::string& which) {
    auto d = syms({"0", "1"});
    if (which == "not")
        return make_table("not", {"x", "y"}, {d, d}, tuples2({{"0", "1"}, {"1", "0"}}));
    std::vector<std::vector<Symbol>> rows;
    for (int x = 0; x <= 1; ++x)
        for (int y = 0; y <= 1; ++y) {
            int z = which == "and" ? (x & y) : which == "or" ? (x | y) : (x ^ y);
            rows.push_back(syms({std::to_string(x), std::to_string(y), std::to_string(z)}));
        }
    if (which != "and" && which != "or" && which != "xor")
        throw Error("unknown boolean table '" + which + "'");
    return make_table(which, {"x", "y", "z"}, {d, d, d}, rows);
}

ConstraintTable build_not_k(int k) {
    std::vector<Symbol> d;
    for (int i = 0; i < k; ++i) d.push_back(intern(std::to_string(i)));
    std::vector<std::vector<Symbol>> rows;
    for (int i = 0; i < k; ++i) rows.push_back({d[i], d[k - 1 - i]});
    return make_table("not_" + std::to_string(k), {"x", "y"}, {d, d}, rows);
}

ConstraintTable build_and_k(int k) {
    // conjunction as componentwise minimum over a product of chains:
    // 3 = Kleene's strong and, 4 = the four-valued (two-bit) meet,
    // 8 = three independent bits, 9 = pairs of three-valued coordinates
    std::vector<int> dims;
    switch (k) {
        case 3: dims = {3}; break;
        case 4: dims = {2, 2}; break;
        case 8: dims = {2, 2, 2}; break;
        case 9: dims = {3, 3}; break;
        default: throw Error("no and table for k=" + std::to_string(k));
    }
    const char* chain3 = "0u1";
    auto decode = [&](int v) {
        std::vector<int> c(dims.size());
        for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
            c[i] = v % dims[i];
            v /= dims[i];
        }
        return c;
    };
    std::vector<Symbol> d;
    for (int v = 0; v < k; ++v) {
        std::string tok;
        for (size_t i = 0; i < dims.size(); ++i) {
            int c = decode(v)[i];
            tok += dims[i] == 3 ? chain3[c] : static_cast<char>('0' + c);
        }
        d.push_back(intern(tok));
    }
    std::vector<std::vector<Symbol>> rows;
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y) {
            auto cx = decode(x), cy = decode(y);
            int z = 0;
            for (size_t i = 0; i < dims.size(); ++i) z = z * dims[i] + std::min(cx[i], cy[i]);
            rows.push_back({d[x], d[y], d[z]});
        }
    return make_table("and" + std::to_string(k), {"x", "y", "z"}, {d, d, d}, rows);
}

ConstraintTable build_and6() {
    auto d = syms({"0", "1", "d", "dnot", "e", "enot"});
    const char* cells[6][6] = {
        // columns: 0, 1, d, dnot, e, enot
        {"0", "0", nullptr, nullptr, "0", "0"},
        {"0", "1", "d", "dnot", "e", "enot"},
        {nullptr, "d", nullptr, nullptr, "d", nullptr},
        {nullptr, "dnot", nullptr, nullptr, nullptr, "dnot"},
        {"0", "e", "d", nullptr, "e", "0"},
        {"0", "enot", nullptr, "dnot", "0", "enot"},
    };
    const char* names[6] = {"0", "1", "d", "dnot", "e", "enot"};
    std::vector<std::vector<Symbol>> rows;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (cells[i][j]) rows.push_back(syms({names[i], names[j], cells[i][j]}));
    return make_table("and6", {"x", "y", "z"}, {d, d, d}, rows);
}

ConstraintTable build_equiv() {
    auto d = syms({"t", "f", "u"});
    return make_table("equiv", {"x", "y", "z"}, {d, d, d},
                      tuples3({{"t", "t", "t"},
                               {"t", "f", "f"},
                               {"t", "u", "u"},
                               {"f", "t", "f"},
                               {"f", "f", "t"},
                               {"f", "u", "u"},
                               {"u", "t", "u"},
                               {"u", "f", "u"},
                               {"u", "u", "u"}}));
}

ConstraintTable build_msign() {
    auto d = syms({"neg", "zero", "pos", "unk"});
    const char* names[4] = {"neg", "zero", "pos", "unk"};
    const char* cells[4][4] = {
        {"pos", "zero", "neg", "unk"},
        {"zero", "zero", "zero", "zero"},
        {"neg", "zero", "pos", "unk"},
        {"unk", "zero", "unk", "unk"},
    };
    std::vector<std::vector<Symbol>> rows;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rows.push_back(syms({names[i], names[j], cells[i][j]}));
    return make_table("msign", {"x", "y", "z"}, {d, d, d}, rows);
}

ConstraintTable build_fork() {
    auto d = syms({"+", "-", "l", "r"});
    return make_table("fork", {"x", "y", "z"}, {d, d, d},
                      tuples3({{"+", "+", "+"},
                               {"-", "-", "-"},
                               {"l", "r", "-"},
                               {"-", "l", "r"},
                               {"r", "-", "l"}}));
}

ConstraintTable build_t() {
    auto d = syms({"+", "-", "l", "r"});
    return make_table("t", {"x", "y", "z"}, {d, d, d},
                      tuples3({{"r", "l", "+"}, {"r", "l", "-"}, {"r", "l", "r"}, {"r", "l", "l"}}));
}

ConstraintTable build_line() {
    auto d = syms({"+", "-", "l", "r"});
    return make_table("line", {"x", "y"}, {d, d},
                      tuples2({{"+", "+"}, {"-", "-"}, {"l", "r"}, {"r", "l"}}));
}

ConstraintTable build_l() {
    auto d = syms({"+", "-", "l", "r"});
    return make_table("l", {"x", "y"}, {d, d},
                      tuples2({{"l", "r"}, {"r", "l"}, {"+", "r"}, {"l", "+"}, {"-", "l"}, {"r", "-"}}));
}

ConstraintTable build_arrow() {
    auto d = syms({"+", "-", "l", "r"});
    return make_table("arrow", {"x", "y", "z"}, {d, d, d},
                      tuples3({{"l", "r", "+"}, {"+", "+", "-"}, {"-", "-", "+"}}));
}

ConstraintTable build_b10m() {
    std::vector<Symbol> d;
    for (int i = 0; i < 10; ++i) d.push_back(intern(std::to_string(i)));
    std::vector<std::vector<Symbol>> rows;
    for (int x = 0; x < 10; ++x)
        for (int y = 0; y < 10; ++y) {
            int p = x * y;
            rows.push_back({d[x], d[y], d[p / 10], d[p % 10]});
        }
    return make_table("b10m", {"x", "y", "c", "z"}, {d, d, d, d}, rows);
}

namespace {

// 13 interval relations, classified from endpoint order. Tokens in the
// conventional listing order.
const std::vector<std::string>& allen_tokens() {
    static const std::vector<std::string> toks = {"b",  "d",  "o",  "m",  "s",  "f", "b-",
                                                  "d-", "o-", "m-", "s-", "f-", "e"};
    return toks;
}

int allen_classify(int a1, int a2, int b1, int b2) {
    if (a2 < b1) return 0;                      // b
    if (a1 > b2) return 6;                      // b-
    if (a2 == b1) return 3;                     // m
    if (a1 == b2) return 9;                     // m-
    if (a1 == b1 && a2 == b2) return 12;        // e
    if (a1 == b1) return a2 < b2 ? 4 : 10;      // s / s-
    if (a2 == b2) return a1 > b1 ? 5 : 11;      // f / f-
    if (a1 > b1 && a2 < b2) return 1;           // d
    if (a1 < b1 && a2 > b2) return 7;           // d-
    return a1 < b1 ? 2 : 8;                     // o / o-
}

}  // namespace

ConstraintTable build_allen() {
    // The composition constraint (rel(A,B), rel(B,C), rel(A,C)), derived by
    // enumerating endpoint configurations. Six endpoints take at most six
    // distinct positions, so values 0..5 realize every consistent triple.
    auto d = syms(allen_tokens());
    std::vector<std::vector<Symbol>> rows;
    std::vector<std::array<int, 2>> ivs;
    for (int p = 0; p < 6; ++p)
        for (int q = p + 1; q < 6; ++q) ivs.push_back({p, q});
    std::vector<std::vector<bool>> seen(13, std::vector<bool>(13 * 13, false));
    for (const auto& A : ivs)
        for (const auto& B : ivs)
            for (const auto& C : ivs) {
                int r1 = allen_classify(A[0], A[1], B[0], B[1]);
                int r2 = allen_classify(B[0], B[1], C[0], C[1]);
                int r3 = allen_classify(A[0], A[1], C[0], C[1]);
                if (seen[r1][r2 * 13 + r3]) continue;
                seen[r1][r2 * 13 + r3] = true;
                rows.push_back({d[r1], d[r2], d[r3]});
            }
    return make_table("allen", {"r1", "r2", "r3"}, {d, d, d}, rows);
}

Csp build_adder_csp() {
    auto hold = [](ConstraintTable t) { return std::make_shared<const ConstraintTable>(std::move(t)); };
    TablePtr tand = hold(build_bool_table("and"));
    TablePtr txor = hold(build_bool_table("xor"));
    TablePtr tor = hold(build_bool_table("or"));
    std::vector<Symbol> b = syms({"0", "1"});
    Csp csp = make_csp({{"i1", b},
                        {"i2", b},
                        {"i3", b},
                        {"o1", b},
                        {"o2", b},
                        {"a1", b},
                        {"a2", b},
                        {"x1", b}});
    add_instance(csp, txor, {"i1", "i2", "x1"});
    add_instance(csp, tand, {"i1", "i2", "a1"});
    add_instance(csp, txor, {"x1", "i3", "o2"});
    add_instance(csp, tand, {"i3", "x1", "a2"});
    add_instance(csp, tor, {"a1", "a2", "o1"});
    return csp;
}

ConstraintTable build_full_adder() {
    ConstraintTable t = materialize(build_adder_csp(), {"i1", "i2", "i3", "o1", "o2"}, "full_adder");
    return t;
}

ConstraintTable build_puzzle_universal() {
    std::vector<std::string> vars = {"child_1", "child_2", "child_3", "room_B", "room_D",
                                     "room_F",  "item_B",  "item_D",  "item_F"};
    auto rooms = syms({"den", "dining", "living"});
    auto items = syms({"book", "frame", "rug"});
    std::vector<std::vector<Symbol>> doms = {syms({"Byron"}), syms({"Denise"}), syms({"Felicia"}),
                                             rooms,           rooms,            rooms,
                                             items,           items,            items};
    std::vector<std::vector<Symbol>> rows;
    std::vector<int> pos(vars.size(), 0);
    while (true) {
        std::vector<Symbol> r(vars.size());
        for (size_t i = 0; i < vars.size(); ++i) r[i] = doms[i][pos[i]];
        rows.push_back(std::move(r));
        int i = static_cast<int>(vars.size()) - 1;
        while (i >= 0 && pos[i] + 1 == static_cast<int>(doms[i].size())) pos[i--] = 0;
        if (i < 0) break;
        pos[i]++;
    }
    return make_table("puzzle", vars, std::move(doms), rows);
}

ConstraintTable build_nonarc() {
    auto d = syms({"0", "1", "2"});
    return make_table("nonarc", {"x", "y"}, {d, d}, tuples2({{"0", "1"}, {"1", "0"}, {"2", "2"}}));
}

RuleSet build_puzzle_rules(const ConstraintTable& puzzle) {
    auto rooms = syms({"den", "dining", "living"});
    auto items = syms({"book", "frame", "rug"});
    RuleSet rs = rebase(all_different_rules({"room_B", "room_D", "room_F"}, rooms), puzzle);
    RuleSet rs2 = rebase(all_different_rules({"item_B", "item_D", "item_F"}, items), puzzle);
    rs.rules.insert(rs.rules.end(), rs2.rules.begin(), rs2.rules.end());

    auto add = [&](const std::vector<std::pair<std::string, std::vector<std::string>>>& premise,
                   const std::string& cv, const std::string& cval) {
        rs.rules.push_back(make_rule(puzzle, premise, cv, cval));
    };
    // clue 1: Byron, the book selector and the den child are three children
    add({}, "item_B", "book");
    add({}, "room_B", "den");
    add({{"item_B", {"book"}}}, "room_B", "den");
    add({{"room_B", {"den"}}}, "item_B", "book");
    add({{"item_D", {"book"}}}, "room_D", "den");
    add({{"room_D", {"den"}}}, "item_D", "book");
    add({{"item_F", {"book"}}}, "room_F", "den");
    add({{"room_F", {"den"}}}, "item_F", "book");
    // clue 2: the rug is in the dining room
    for (const char* who : {"B", "D", "F"}) {
        std::string item = std::string("item_") + who, room = std::string("room_") + who;
        add({{item, {"rug"}}}, room, "den");
        add({{item, {"rug"}}}, room, "living");
    }
    // clue 3: Felicia selected the frame
    add({}, "item_F", "rug");
    add({}, "item_F", "book");

    rs.table = puzzle.name;
    canonicalize(rs, puzzle);
    return rs;
}

ConstraintTable build_table(const std::string& name) {
    if (name == "and" || name == "or" || name == "xor" || name == "not")
        return build_bool_table(name);
    if (name.rfind("not_", 0) == 0) return build_not_k(std::stoi(name.substr(4)));
    if (name.size() == 4 && name.rfind("and", 0) == 0 &&
        std::isdigit(static_cast<unsigned char>(name[3]))) {
        int k = name[3] - '0';
        return k == 6 ? build_and6() : build_and_k(k);
    }
    if (name == "equiv") return build_equiv();
    if (name == "msign") return build_msign();
    if (name == "fork") return build_fork();
    if (name == "t") return build_t();
    if (name == "line") return build_line();
    if (name == "l") return build_l();
    if (name == "arrow") return build_arrow();
    if (name == "b10m") return build_b10m();
    if (name == "allen") return build_allen();
    if (name == "full_adder") return build_full_adder();
    if (name == "puzzle") return build_puzzle_universal();
    if (name == "nonarc") return build_nonarc();
    throw Error("no builder for table '" + name + "'");
}

const std::vector<CorpusInfo>& corpus_catalog() {
    static const std::vector<CorpusInfo> catalog = {
        // name, eq, mem, cardinality, bench_tier, external, in_bench
        {"fork", 12, 24, 5, false, false, true},
        {"t", 1, 1, 4, false, false, true},
        {"not", 4, 4, 2, false, false, true},
        {"not_3", 6, 6, 3, false, false, true},
        {"not_4", 8, 8, 4, false, false, true},
        {"not_6", 12, 12, 6, false, false, true},
        {"not_8", 16, 16, 8, false, false, true},
        {"not_9", 18, 18, 9, false, false, true},
        {"and", 6, 6, 4, false, false, true},
        {"and3", 16, 18, 9, false, false, true},
        {"and4", 26, 43, 16, false, false, true},
        {"and6", 41, 155, 24, false, false, true},
        {"and8", 96, 622, 64, true, false, true},
        {"and9", 134, 1294, 81, true, false, true},
        {"msign", 34, 54, 16, false, false, true},
        {"full_adder", 52, 52, 8, false, false, true},
        {"equiv", 20, 26, 9, false, false, true},
        {"b10m", 362, std::nullopt, 100, true, false, true},
        {"allen", 498, std::nullopt, 409, true, true, true},
        {"or", std::nullopt, std::nullopt, 4, false, false, false},
        {"xor", std::nullopt, std::nullopt, 4, false, false, false},
        {"line", std::nullopt, std::nullopt, 4, false, false, false},
        {"l", std::nullopt, std::nullopt, 6, false, true, false},
        {"arrow", std::nullopt, std::nullopt, 3, false, true, false},
        {"nonarc", std::nullopt, std::nullopt, 3, false, false, false},
        {"puzzle", std::nullopt, std::nullopt, 729, false, false, false},
    };
    return catalog;
}

const CorpusInfo* corpus_info(const std::string& name) {
    for (const auto& e : corpus_catalog())
        if (e.name == name) return &e;
    return nullptr;
}

namespace {

std::mutex g_corpus_mtx;
std::string g_corpus_dir = RULESMITH_CORPUS_DIR;
std::map<std::string, TablePtr> g_tables;

}  // namespace

std::string corpus_dir() {
    std::scoped_lock lock(g_corpus_mtx);
    return g_corpus_dir;
}

void set_corpus_dir(std::string dir) {
    std::scoped_lock lock(g_corpus_mtx);
    g_corpus_dir = std::move(dir);
    g_tables.clear();
}

TablePtr corpus_table(const std::string& name) {
    if (!corpus_info(name)) throw Error("unknown corpus table '" + name + "'");
    std::scoped_lock lock(g_corpus_mtx);
    auto it = g_tables.find(name);
    if (it != g_tables.end()) return it->second;
    ConstraintTable t = load_table(g_corpus_dir + "/" + name + ".ct");
    if (t.name != name)
        throw Error("corpus file for '" + name + "' declares table '" + t.name + "'");
    TablePtr p = std::make_shared<const ConstraintTable>(std::move(t));
    g_tables.emplace(name, p);
    return p;
}

TableResolver corpus_resolver() {
    return [](const std::string& name) -> TablePtr {
        if (!corpus_info(name)) return nullptr;
        return corpus_table(name);
    };
}

Fixture corpus_fixture(const std::string& name) {
    Fixture f;
    std::string path = corpus_dir() + "/" + name + ".csp";
    CspFile file = load_csp(path, corpus_resolver());
    f.csp = std::move(file.csp);
    for (const std::string& rel : file.rules_files) {
        std::string rpath = corpus_dir() + "/" + rel;
        std::string text = read_file(rpath);
        // the header names the base table; resolve it, then parse for real
        std::string tname;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string w0, w1;
            if (ls >> w0 >> w1 && w0 == "table") {
                tname = w1;
                break;
            }
        }
        if (tname.empty()) throw Error(rpath + ": missing 'table' header");
        TablePtr t = corpus_resolver()(tname);
        if (!t) throw Error(rpath + ": unknown table '" + tname + "'");
        f.rules.push_back(load_rules(rpath, *t));
    }
    return f;
}

}  // namespace rulesmith
