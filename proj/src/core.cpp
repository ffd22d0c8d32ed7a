#include "rulesmith/core.hpp"

#include <mutex>
#include <unordered_map>

namespace rulesmith {

namespace {

struct Interner {
    std::mutex mtx;
    std::unordered_map<std::string, Symbol> ids;
    std::vector<std::string> toks;
};

Interner& interner() {
    static Interner it;
    return it;
}

}  // namespace

Symbol intern(std::string_view tok) {
    auto& it = interner();
    std::scoped_lock lock(it.mtx);
    auto found = it.ids.find(std::string(tok));
    if (found != it.ids.end()) return found->second;
    Symbol s = static_cast<Symbol>(it.toks.size());
    it.toks.emplace_back(tok);
    it.ids.emplace(std::string(tok), s);
    return s;
}

const std::string& token(Symbol s) {
    auto& it = interner();
    std::scoped_lock lock(it.mtx);
    return it.toks.at(s);
}

std::vector<Symbol> intern_all(const std::vector<std::string>& toks) {
    std::vector<Symbol> out;
    out.reserve(toks.size());
    for (const auto& t : toks) out.push_back(intern(t));
    return out;
}

DomainDecl::DomainDecl(std::vector<Symbol> vs) : values(std::move(vs)) {
    if (values.size() > 64)
        throw Error("domain too large: " + std::to_string(values.size()) + " values (max 64)");
    for (size_t i = 0; i < values.size(); ++i)
        for (size_t j = i + 1; j < values.size(); ++j)
            if (values[i] == values[j])
                throw Error("duplicate value '" + token(values[i]) + "' in domain");
}

int DomainDecl::index_of(Symbol s) const {
    for (size_t i = 0; i < values.size(); ++i)
        if (values[i] == s) return static_cast<int>(i);
    return -1;
}

Bits DomainDecl::mask_of(const std::vector<Symbol>& subset_values) const {
    Bits m = 0;
    for (Symbol s : subset_values) {
        int i = index_of(s);
        if (i < 0) throw Error("value '" + token(s) + "' not in domain");
        m |= bit(i);
    }
    return m;
}

std::vector<Symbol> DomainDecl::symbols_of(Bits mask) const {
    std::vector<Symbol> out;
    for_bits(mask, [&](int i) {
        if (i >= size()) throw Error("bit outside domain");
        out.push_back(values[i]);
    });
    return out;
}

}  // namespace rulesmith
