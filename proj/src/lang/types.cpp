// SPDX-License-Identifier: Apache-2.0
#include "routenet/lang/types.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "routenet/errors.hpp"

namespace routenet::lang {

TypePtr unit_type() {
    static const TypePtr u = std::make_shared<const TypeExpr>(TypeExpr{TypeKind::Unit, nullptr, nullptr, {}, ""});
    return u;
}

TypePtr behavior_type(TypePtr l, TypePtr r) {
    return std::make_shared<const TypeExpr>(TypeExpr{TypeKind::Behavior, std::move(l), std::move(r), {}, ""});
}

TypePtr arrow_type(TypePtr arg, Effect e, TypePtr res) {
    return std::make_shared<const TypeExpr>(TypeExpr{TypeKind::Arrow, std::move(arg), std::move(res), std::move(e), ""});
}

TypePtr reg_type(std::string r, TypePtr a) {
    return std::make_shared<const TypeExpr>(TypeExpr{TypeKind::Reg, std::move(a), nullptr, {}, std::move(r)});
}

bool type_equal(const TypeExpr& a, const TypeExpr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case TypeKind::Unit:
        return true;
    case TypeKind::Behavior:
        if (!a.arg || !b.arg) return true;
        return type_equal(*a.arg, *b.arg) && type_equal(*a.res, *b.res);
    case TypeKind::Arrow:
        return a.effect == b.effect && type_equal(*a.arg, *b.arg) && type_equal(*a.res, *b.res);
    case TypeKind::Reg:
        return a.reg == b.reg && type_equal(*a.arg, *b.arg);
    }
    return false;
}

std::string print(const Effect& e) {
    std::string s = "{";
    bool first = true;
    for (const auto& r : e) {
        s += (first ? "" : ",") + r;
        first = false;
    }
    return s + "}";
}

std::string print(const TypeExpr& t) {
    switch (t.kind) {
    case TypeKind::Unit:
        return "Unit";
    case TypeKind::Behavior:
        return "B";
    case TypeKind::Arrow: {
        std::string l = print(*t.arg);
        if (t.arg->kind == TypeKind::Arrow || t.arg->kind == TypeKind::Reg) l = "(" + l + ")";
        std::string arrow = t.effect.empty() ? " -> " : " -" + print(t.effect) + "> ";
        return l + arrow + print(*t.res);
    }
    case TypeKind::Reg: {
        std::string a = print(*t.arg);
        if (t.arg->kind == TypeKind::Arrow || t.arg->kind == TypeKind::Reg) a = "(" + a + ")";
        return "Reg " + t.reg + " " + a;
    }
    }
    return "";
}

// ---------------------------------------------------------------- type syntax

namespace {

class TypeParser {
public:
    TypeParser(std::string_view s, std::size_t base) : s_(s), base_(base) {}

    TypePtr whole() {
        TypePtr t = type();
        skip();
        if (i_ != s_.size()) fail("unexpected text after type");
        return t;
    }

private:
    std::string_view s_;
    std::size_t base_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& why) const { throw ParseError(base_ + i_, why); }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(std::string_view t) {
        skip();
        if (s_.substr(i_, t.size()) == t) {
            i_ += t.size();
            return true;
        }
        return false;
    }
    std::string word() {
        skip();
        std::size_t at = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\'')) ++i_;
        if (at == i_) fail("expected a name");
        return std::string(s_.substr(at, i_ - at));
    }

    TypePtr type() {
        TypePtr left = atom();
        skip();
        if (eat("->")) return arrow_type(left, {}, type());
        if (eat("-{")) {
            Effect e;
            skip();
            if (!eat("}")) {
                do e.insert(word());
                while (eat(","));
                if (!eat("}")) fail("expected '}'");
            }
            if (!eat(">")) fail("expected '>'");
            return arrow_type(left, std::move(e), type());
        }
        return left;
    }

    TypePtr atom() {
        skip();
        if (eat("(")) {
            TypePtr t = type();
            if (!eat(")")) fail("expected ')'");
            return t;
        }
        std::size_t at = i_;
        std::string w = word();
        if (w == "Unit") return unit_type();
        if (w == "B") return behavior_type();
        if (w == "Reg") {
            std::string r = word();
            return reg_type(r, atom());
        }
        i_ = at;
        fail("unknown type '" + w + "'");
    }
};

}  // namespace

TypePtr parse_type(std::string_view text) { return TypeParser(text, 0).whole(); }

Effect latent_refs(const TypeExpr& t) {
    Effect out;
    std::function<void(const TypeExpr&)> go = [&](const TypeExpr& u) {
        if (u.kind == TypeKind::Arrow) out.insert(u.effect.begin(), u.effect.end());
        if (u.arg) go(*u.arg);
        if (u.res) go(*u.res);
    };
    go(t);
    return out;
}

TypePtr RegionCtx::find(const std::string& r) const {
    for (const auto& [name, t] : entries)
        if (name == r) return t;
    return nullptr;
}

RegionCtx parse_region_ctx(std::string_view text) {
    RegionCtx ctx;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t end = text.find('\n', line_start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(line_start, end - line_start);
        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t k = 0;
        while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
        if (k < line.size()) {
            std::size_t colon = line.find(':');
            if (colon == std::string_view::npos) throw ParseError(line_start + k, "expected 'r : type'");
            std::string_view name = line.substr(k, colon - k);
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.remove_suffix(1);
            if (name.empty()) throw ParseError(line_start + k, "missing reference name");
            for (char c : name)
                if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''))
                    throw ParseError(line_start + k, "bad reference name");
            if (ctx.contains(std::string(name))) throw ParseError(line_start + k, "reference listed twice");
            TypePtr t = TypeParser(line.substr(colon + 1), line_start + colon + 1).whole();
            ctx.entries.emplace_back(std::string(name), t);
        }
        if (end == text.size()) break;
        line_start = end + 1;
    }
    return ctx;
}

Stratification check_stratified(const RegionCtx& r) {
    Stratification s;
    std::map<std::string, Effect> deps;
    for (const auto& [name, t] : r.entries) {
        Effect e = latent_refs(*t);
        for (const auto& d : e)
            if (!r.contains(d)) {
                s.reason = "type of " + name + " mentions unknown reference " + d;
                return s;
            }
        deps[name] = e;
    }
    // Kahn's algorithm in declaration order for a deterministic witness.
    std::vector<std::string> pending;
    for (const auto& [name, t] : r.entries) pending.push_back(name);
    std::set<std::string> placed;
    while (!pending.empty()) {
        auto it = std::find_if(pending.begin(), pending.end(), [&](const std::string& n) {
            return std::all_of(deps[n].begin(), deps[n].end(), [&](const std::string& d) { return placed.count(d) != 0; });
        });
        if (it == pending.end()) {
            s.reason = "references depend on each other cyclically, starting at " + pending.front();
            s.order.clear();
            return s;
        }
        s.order.push_back(*it);
        placed.insert(*it);
        pending.erase(it);
    }
    s.ok = true;
    return s;
}

const Judgement& Derivation::at(const Term& t) const {
    auto it = nodes.find(&t);
    if (it == nodes.end()) throw Error(ErrorKind::DerivationMismatch, "derivation has no judgement for `" + print(t) + "`");
    return it->second;
}

bool subtype(const TypeExpr& a, const Effect& e, const TypeExpr& b, const Effect& f) {
    if (!std::includes(f.begin(), f.end(), e.begin(), e.end())) return false;
    std::function<bool(const TypeExpr&, const TypeExpr&)> le = [&](const TypeExpr& x, const TypeExpr& y) -> bool {
        if (x.kind != y.kind) return false;
        if (x.kind == TypeKind::Arrow)
            return type_equal(*x.arg, *y.arg) && std::includes(y.effect.begin(), y.effect.end(), x.effect.begin(), x.effect.end()) &&
                   le(*x.res, *y.res);
        if (x.kind == TypeKind::Behavior) return true;
        return type_equal(x, y);
    };
    return le(a, b);
}

// ---------------------------------------------------------------- inference

namespace {

[[noreturn]] void type_error(const std::string& rule, const std::string& what) {
    throw Error(ErrorKind::Type, rule + ": " + what);
}

class Inference {
public:
    Inference(const RegionCtx& r, bool lthis) : r_(r), lthis_(lthis) {}

    Derivation run(const VarCtx& g, const TermPtr& m, const TypePtr& expected) {
        Stratification s = check_stratified(r_);
        if (!s.ok) throw Error(ErrorKind::NotStratified, s.reason);
        std::map<std::string, int> env;
        for (const auto& [x, t] : g) env[x] = from_type(*t, "(var)");
        auto [t, e] = infer(m, env);
        if (expected) unify(t, from_type(*expected, "(sub)"), "(sub)");
        solve();

        Derivation d;
        d.term = m;
        for (const auto& [node, te] : seen_) d.nodes[node] = Judgement{resolve(te.first), effect_of(te.second)};
        d.result = Judgement{resolve(t), effect_of(e)};
        for (int b : binders_)
            if (kind(b) == K::Beh || kind(b) == K::BehPlain) type_error("(lam)", "a bound variable cannot have type B");
        for (const auto& [node, r] : subst_checks_) {
            const Effect& body = d.nodes.at(node->a.get()).effect;
            if (!body.count(r))
                d.relaxations.push_back("(subst-r): " + r + " is outside the effect " + print(body) + " of `" + print(*node->a) + "`");
        }
        return d;
    }

private:
    enum class K { Var, Unit, Arrow, Beh, BehPlain };
    struct Node {
        K kind;
        int a = -1, b = -1, eff = -1;
    };
    struct EffClass {
        Effect lower;
        std::optional<Effect> fixed;
    };

    const RegionCtx& r_;
    bool lthis_;
    std::vector<Node> nodes_;
    std::vector<int> parent_;
    std::vector<int> eparent_;
    std::vector<EffClass> eff_;
    std::vector<std::pair<int, int>> edges_;  // first ⊆ second
    std::map<int, Effect> solved_;
    std::unordered_map<const Term*, std::pair<int, int>> seen_;
    std::vector<int> binders_;
    std::vector<std::pair<const Term*, std::string>> subst_checks_;

    int node(K k, int a = -1, int b = -1, int eff = -1) {
        nodes_.push_back(Node{k, a, b, eff});
        parent_.push_back(static_cast<int>(parent_.size()));
        return static_cast<int>(nodes_.size()) - 1;
    }
    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    K kind(int x) { return nodes_[find(x)].kind; }

    int effect(Effect lower = {}, std::optional<Effect> fixed = std::nullopt) {
        eff_.push_back(EffClass{std::move(lower), std::move(fixed)});
        eparent_.push_back(static_cast<int>(eparent_.size()));
        return static_cast<int>(eff_.size()) - 1;
    }
    int efind(int x) {
        while (eparent_[x] != x) x = eparent_[x] = eparent_[eparent_[x]];
        return x;
    }
    void emerge(int a, int b, const char* rule) {
        a = efind(a);
        b = efind(b);
        if (a == b) return;
        auto& A = eff_[a];
        auto& B = eff_[b];
        if (A.fixed && B.fixed && *A.fixed != *B.fixed)
            type_error(rule, "latent effects " + print(*A.fixed) + " and " + print(*B.fixed) + " differ");
        A.lower.insert(B.lower.begin(), B.lower.end());
        if (!A.fixed) A.fixed = B.fixed;
        eparent_[b] = a;
    }

    int from_type(const TypeExpr& t, const char* rule) {
        switch (t.kind) {
        case TypeKind::Unit:
            return node(K::Unit);
        case TypeKind::Behavior:
            if (t.arg) return node(K::Beh, from_type(*t.arg, rule), from_type(*t.res, rule));
            return node(K::BehPlain);
        case TypeKind::Arrow:
            return node(K::Arrow, from_type(*t.arg, rule), from_type(*t.res, rule), effect({}, t.effect));
        case TypeKind::Reg:
            type_error(rule, "Reg types are not value types");
        }
        return -1;
    }

    bool occurs(int v, int t) {
        t = find(t);
        if (t == v) return true;
        const Node& n = nodes_[t];
        return (n.a >= 0 && occurs(v, n.a)) || (n.b >= 0 && occurs(v, n.b));
    }

    std::string show(int t) {
        t = find(t);
        const Node& n = nodes_[t];
        switch (n.kind) {
        case K::Var: return "?" + std::to_string(t);
        case K::Unit: return "Unit";
        case K::Beh:
        case K::BehPlain: return "B";
        case K::Arrow: return "(" + show(n.a) + " -> " + show(n.b) + ")";
        }
        return "";
    }

    void unify(int x, int y, const char* rule) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        Node nx = nodes_[x], ny = nodes_[y];
        if (nx.kind == K::Var) {
            if (occurs(x, y)) type_error(rule, "recursive type");
            parent_[x] = y;
            return;
        }
        if (ny.kind == K::Var) {
            unify(y, x, rule);
            return;
        }
        if (nx.kind == K::BehPlain && (ny.kind == K::Beh || ny.kind == K::BehPlain)) {
            parent_[x] = y;
            return;
        }
        if (ny.kind == K::BehPlain && nx.kind == K::Beh) {
            parent_[y] = x;
            return;
        }
        if (nx.kind != ny.kind) type_error(rule, "cannot match " + show(x) + " with " + show(y));
        parent_[x] = y;
        if (nx.kind == K::Arrow) {
            unify(nx.a, ny.a, rule);
            unify(nx.b, ny.b, rule);
            emerge(nx.eff, ny.eff, rule);
        } else if (nx.kind == K::Beh) {
            unify(nx.a, ny.a, rule);
            unify(nx.b, ny.b, rule);
        }
    }

    int ref_type(const std::string& r, const char* rule) {
        TypePtr t = r_.find(r);
        if (!t) type_error(rule, "unknown reference " + r);
        return from_type(*t, rule);
    }

    void typecheck_refs(const RefValues& refs, const std::map<std::string, int>& env) {
        for (const auto& [r, vs] : refs) {
            int tr = ref_type(r, "(subst-r)");
            for (const auto& v : vs) {
                if (!is_value(*v)) type_error("(subst-r)", "`" + print(*v) + "` is not a value");
                unify(infer(v, env).first, tr, "(subst-r)");
            }
        }
    }

    std::pair<int, int> infer(const TermPtr& m, const std::map<std::string, int>& env) {
        std::pair<int, int> te = infer_node(*m, env);
        auto it = seen_.find(m.get());
        if (it == seen_.end()) {
            seen_.emplace(m.get(), te);
        } else {
            unify(it->second.first, te.first, "(share)");
            edges_.emplace_back(te.second, it->second.second);
            edges_.emplace_back(it->second.second, te.second);
        }
        return te;
    }

    std::pair<int, int> infer_node(const Term& t, const std::map<std::string, int>& env) {
        switch (t.kind) {
        case TermKind::Var: {
            auto it = env.find(t.name);
            if (it == env.end()) type_error("(var)", "unbound variable " + t.name);
            return {it->second, effect()};
        }
        case TermKind::Star:
            return {node(K::Unit), effect()};
        case TermKind::Lam: {
            int x = node(K::Var);
            binders_.push_back(x);
            auto inner = env;
            inner[t.name] = x;
            auto [tb, eb] = infer(t.a, inner);
            int latent = effect();
            edges_.emplace_back(eb, latent);
            return {node(K::Arrow, x, tb, latent), effect()};
        }
        case TermKind::App: {
            auto [tf, ef] = infer(t.a, env);
            auto [ta, ea] = infer(t.b, env);
            int res = node(K::Var);
            int latent = effect();
            unify(tf, node(K::Arrow, ta, res, latent), "(app)");
            int e = effect();
            edges_.emplace_back(ef, e);
            edges_.emplace_back(ea, e);
            edges_.emplace_back(latent, e);
            return {res, e};
        }
        case TermKind::Get:
            return {ref_type(t.name, "(get)"), effect({t.name})};
        case TermKind::Set: {
            if (!is_value(*t.a)) type_error("(set)", "`" + print(*t.a) + "` is not a value");
            int tr = ref_type(t.name, "(set)");
            unify(infer(t.a, env).first, tr, "(set)");
            return {node(K::Unit), effect({t.name})};
        }
        case TermKind::Store: {
            if (lthis_) type_error("(store)", "stores are not intermediate-language terms");
            if (!is_value(*t.a)) type_error("(store)", "`" + print(*t.a) + "` is not a value");
            int tr = ref_type(t.name, "(store)");
            unify(infer(t.a, env).first, tr, "(store)");
            return {node(K::BehPlain), effect()};
        }
        case TermKind::Par: {
            auto [tl, el] = infer(t.a, env);
            auto [tr, er] = infer(t.b, env);
            int e = effect();
            edges_.emplace_back(el, e);
            edges_.emplace_back(er, e);
            return {node(K::Beh, tl, tr), e};
        }
        case TermKind::Sum: {
            if (!lthis_) type_error("(sum)", "sums are not source terms");
            auto [tl, el] = infer(t.a, env);
            auto [tr, er] = infer(t.b, env);
            unify(tl, tr, "(sum)");
            int e = effect();
            edges_.emplace_back(el, e);
            edges_.emplace_back(er, e);
            return {tl, e};
        }
        case TermKind::VarSubst: {
            if (!lthis_) type_error("(subst)", "explicit substitutions are not source terms");
            auto inner = env;
            for (const auto& [x, v] : t.sigma) {
                if (!is_value(*v)) type_error("(subst)", "`" + print(*v) + "` is not a value");
                int tv = infer(v, env).first;
                binders_.push_back(tv);
                inner[x] = tv;
            }
            return infer(t.a, inner);
        }
        case TermKind::LamSubst:
        case TermKind::DownSubst:
        case TermKind::UpSubst: {
            if (!lthis_) type_error("(subst-r)", "reference substitutions are not source terms");
            if (t.kind == TermKind::LamSubst && t.a->kind != TermKind::App)
                type_error("(subst-r)", "a lambda-substitution must wrap an application");
            typecheck_refs(t.refs, env);
            auto te = infer(t.a, env);
            for (const auto& [r, vs] : t.refs) subst_checks_.emplace_back(&t, r);
            return te;
        }
        }
        return {node(K::Unit), effect()};
    }

    void solve() {
        std::map<int, Effect> sol;
        for (std::size_t k = 0; k < eff_.size(); ++k) {
            int rep = efind(static_cast<int>(k));
            if (rep != static_cast<int>(k)) continue;
            const auto& c = eff_[k];
            if (c.fixed && !std::includes(c.fixed->begin(), c.fixed->end(), c.lower.begin(), c.lower.end()))
                type_error("(sub)", "effect " + print(c.lower) + " exceeds the declared " + print(*c.fixed));
            sol[rep] = c.fixed ? *c.fixed : c.lower;
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto [from, to] : edges_) {
                int f = efind(from), t = efind(to);
                if (f == t) continue;
                const Effect& src = sol[f];
                Effect& dst = sol[t];
                if (std::includes(dst.begin(), dst.end(), src.begin(), src.end())) continue;
                if (eff_[t].fixed)
                    type_error("(sub)", "effect " + print(src) + " exceeds the declared " + print(*eff_[t].fixed));
                dst.insert(src.begin(), src.end());
                changed = true;
            }
        }
        solved_ = std::move(sol);
    }

    Effect effect_of(int e) { return solved_[efind(e)]; }

    TypePtr resolve(int t) {
        t = find(t);
        const Node& n = nodes_[t];
        switch (n.kind) {
        case K::Var:
        case K::Unit:
            return unit_type();
        case K::BehPlain:
            return behavior_type();
        case K::Beh:
            return behavior_type(resolve(n.a), resolve(n.b));
        case K::Arrow:
            return arrow_type(resolve(n.a), effect_of(n.eff), resolve(n.b));
        }
        return unit_type();
    }
};

}  // namespace

Derivation typecheck_amadio(const RegionCtx& r, const VarCtx& g, const TermPtr& m, TypePtr expected) {
    if (!is_source_term(*m)) throw Error(ErrorKind::Type, "(syntax): not a source term");
    return Inference(r, false).run(g, m, expected);
}

Derivation typecheck_lthis(const RegionCtx& r, const VarCtx& g, const TermPtr& m, TypePtr expected) {
    return Inference(r, true).run(g, m, expected);
}

}  // namespace routenet::lang
