// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace routenet {

namespace detail {
struct FormulaNode;
}

/**
 * MELL formula, hash-consed: two formulas are equal iff they share a node,
 * so comparison is a pointer test and dual() is cached.
 *
 * Text form: `1`, `bot`, `!T`, `?T`, `(T*T)` for tensor, `(T%T)` for par.
 */
class Formula {
public:
    enum class Kind { One, Bottom, Bang, Whynot, Tensor, Par };

    Formula() = default;

    static Formula one();
    static Formula bottom();
    static Formula bang(Formula a);
    static Formula whynot(Formula a);
    static Formula tensor(Formula a, Formula b);
    static Formula par(Formula a, Formula b);
    static Formula parse(std::string_view text);

    explicit operator bool() const { return node_ != nullptr; }
    Kind kind() const;
    /** Operand of ! and ?, or the left operand of a binary connective. */
    Formula left() const;
    Formula right() const;
    Formula dual() const;
    std::size_t depth() const;
    const std::string& str() const;

    bool is_bang() const { return node_ && kind() == Kind::Bang; }
    bool is_whynot() const { return node_ && kind() == Kind::Whynot; }

    friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
    friend bool operator!=(Formula a, Formula b) { return a.node_ != b.node_; }
    friend bool operator<(Formula a, Formula b) { return a.str() < b.str(); }

    const void* id() const { return node_; }

private:
    explicit Formula(const detail::FormulaNode* n) : node_(n) {}
    static Formula make(Kind k, Formula a, Formula b);

    const detail::FormulaNode* node_ = nullptr;
};

}  // namespace routenet

template <>
struct std::hash<routenet::Formula> {
    std::size_t operator()(routenet::Formula f) const noexcept { return std::hash<const void*>()(f.id()); }
};
