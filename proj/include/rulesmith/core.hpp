#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rulesmith {

/// Interned value token. Two Symbols are equal iff their source tokens are.
using Symbol = std::uint32_t;

/// Subset of a DomainDecl, bit i = i-th declared value.
using Bits = std::uint64_t;

Symbol intern(std::string_view tok);
const std::string& token(Symbol s);

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Bits bit(int i) { return Bits{1} << i; }
inline bool has_bit(Bits b, int i) { return (b >> i) & 1; }
inline bool is_subset(Bits a, Bits b) { return (a & ~b) == 0; }
inline int popcount(Bits b) { return std::popcount(b); }

template <class F>
void for_bits(Bits b, F&& f) {
    while (b) {
        f(std::countr_zero(b));
        b &= b - 1;
    }
}

/// Finite value alphabet. The order of `values` is the declaration order
/// and fixes iteration, printing and the bitset layout.
struct DomainDecl {
    std::vector<Symbol> values;

    DomainDecl() = default;
    explicit DomainDecl(std::vector<Symbol> vs);

    int size() const { return static_cast<int>(values.size()); }
    int index_of(Symbol s) const;  // -1 when absent
    Bits full() const { return size() == 64 ? ~Bits{0} : bit(size()) - 1; }
    Bits mask_of(const std::vector<Symbol>& subset_values) const;  // throws on unknown value
    std::vector<Symbol> symbols_of(Bits mask) const;

    bool operator==(const DomainDecl&) const = default;
};

std::vector<Symbol> intern_all(const std::vector<std::string>& toks);

}  // namespace rulesmith
