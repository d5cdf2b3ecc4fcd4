// SPDX-License-Identifier: Apache-2.0
#include "routenet/formula.hpp"

#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "routenet/errors.hpp"

namespace routenet {

namespace detail {

struct FormulaNode {
    Formula::Kind kind;
    Formula a;
    Formula b;
    std::size_t depth = 0;
    std::string text;
    mutable const FormulaNode* dual = nullptr;
};

}  // namespace detail

namespace {

struct Key {
    Formula::Kind kind;
    const void* a;
    const void* b;
    bool operator==(const Key& o) const { return kind == o.kind && a == o.a && b == o.b; }
};

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
        std::size_t h = static_cast<std::size_t>(k.kind);
        h = h * 1000003u ^ std::hash<const void*>()(k.a);
        h = h * 1000003u ^ std::hash<const void*>()(k.b);
        return h;
    }
};

struct Table {
    std::mutex mu;
    std::unordered_map<Key, std::unique_ptr<detail::FormulaNode>, KeyHash> nodes;
};

Table& table() {
    static Table* t = new Table();  // intentionally leaked: formulas live for the whole process
    return *t;
}

}  // namespace

Formula Formula::make(Kind k, Formula a, Formula b) {
    Key key{k, a.node_, b.node_};
    Table& t = table();
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.nodes.find(key);
    if (it != t.nodes.end()) return Formula(it->second.get());
    auto node = std::make_unique<detail::FormulaNode>();
    node->kind = k;
    node->a = a;
    node->b = b;
    switch (k) {
    case Kind::One: node->text = "1"; break;
    case Kind::Bottom: node->text = "bot"; break;
    case Kind::Bang: node->text = "!" + a.str(); node->depth = a.depth() + 1; break;
    case Kind::Whynot: node->text = "?" + a.str(); node->depth = a.depth() + 1; break;
    case Kind::Tensor:
        node->text = "(" + a.str() + "*" + b.str() + ")";
        node->depth = std::max(a.depth(), b.depth()) + 1;
        break;
    case Kind::Par:
        node->text = "(" + a.str() + "%" + b.str() + ")";
        node->depth = std::max(a.depth(), b.depth()) + 1;
        break;
    }
    const detail::FormulaNode* raw = node.get();
    t.nodes.emplace(key, std::move(node));
    return Formula(raw);
}

Formula Formula::one() { return make(Kind::One, {}, {}); }
Formula Formula::bottom() { return make(Kind::Bottom, {}, {}); }
Formula Formula::bang(Formula a) { return make(Kind::Bang, a, {}); }
Formula Formula::whynot(Formula a) { return make(Kind::Whynot, a, {}); }
Formula Formula::tensor(Formula a, Formula b) { return make(Kind::Tensor, a, b); }
Formula Formula::par(Formula a, Formula b) { return make(Kind::Par, a, b); }

Formula::Kind Formula::kind() const { return node_->kind; }
Formula Formula::left() const { return node_->a; }
Formula Formula::right() const { return node_->b; }
std::size_t Formula::depth() const { return node_->depth; }
const std::string& Formula::str() const {
    static const std::string empty = "<none>";
    return node_ ? node_->text : empty;
}

Formula Formula::dual() const {
    if (node_->dual) return Formula(node_->dual);
    Formula d;
    switch (kind()) {
    case Kind::One: d = bottom(); break;
    case Kind::Bottom: d = one(); break;
    case Kind::Bang: d = whynot(left().dual()); break;
    case Kind::Whynot: d = bang(left().dual()); break;
    case Kind::Tensor: d = par(left().dual(), right().dual()); break;
    case Kind::Par: d = tensor(left().dual(), right().dual()); break;
    }
    node_->dual = d.node_;  // benign race: every writer stores the same pointer
    return d;
}

namespace {

struct FormulaParser {
    std::string_view s;
    std::size_t pos = 0;

    Formula parse() {
        if (pos >= s.size()) throw ParseError(pos, "unexpected end of formula");
        char c = s[pos];
        if (c == '1') { ++pos; return Formula::one(); }
        if (s.substr(pos, 3) == "bot") { pos += 3; return Formula::bottom(); }
        if (c == '!') { ++pos; return Formula::bang(parse()); }
        if (c == '?') { ++pos; return Formula::whynot(parse()); }
        if (c == '(') {
            ++pos;
            Formula a = parse();
            if (pos >= s.size() || (s[pos] != '*' && s[pos] != '%')) throw ParseError(pos, "expected '*' or '%'");
            char op = s[pos++];
            Formula b = parse();
            if (pos >= s.size() || s[pos] != ')') throw ParseError(pos, "expected ')'");
            ++pos;
            return op == '*' ? Formula::tensor(a, b) : Formula::par(a, b);
        }
        throw ParseError(pos, std::string("unexpected character '") + c + "' in formula");
    }
};

}  // namespace

Formula Formula::parse(std::string_view text) {
    FormulaParser p{text};
    Formula f = p.parse();
    if (p.pos != text.size()) throw ParseError(p.pos, "trailing characters after formula");
    return f;
}

}  // namespace routenet
