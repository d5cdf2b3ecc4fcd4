// SPDX-License-Identifier: Apache-2.0
#include "routenet/lang/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "routenet/errors.hpp"

namespace routenet::lang {

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

}  // namespace

TermPtr var(std::string x) { return make(Term{TermKind::Var, std::move(x), nullptr, nullptr, {}, {}}); }
TermPtr star() { return make(Term{TermKind::Star, "", nullptr, nullptr, {}, {}}); }
TermPtr lam(std::string x, TermPtr body) { return make(Term{TermKind::Lam, std::move(x), std::move(body), nullptr, {}, {}}); }
TermPtr app(TermPtr f, TermPtr arg) { return make(Term{TermKind::App, "", std::move(f), std::move(arg), {}, {}}); }
TermPtr get(std::string r) { return make(Term{TermKind::Get, std::move(r), nullptr, nullptr, {}, {}}); }
TermPtr set(std::string r, TermPtr v) { return make(Term{TermKind::Set, std::move(r), std::move(v), nullptr, {}, {}}); }
TermPtr par(TermPtr l, TermPtr r) { return make(Term{TermKind::Par, "", std::move(l), std::move(r), {}, {}}); }
TermPtr store(std::string r, TermPtr v) { return make(Term{TermKind::Store, std::move(r), std::move(v), nullptr, {}, {}}); }
TermPtr var_subst(std::map<std::string, TermPtr> sigma, TermPtr body) {
    return make(Term{TermKind::VarSubst, "", std::move(body), nullptr, std::move(sigma), {}});
}
TermPtr lam_subst(RefValues refs, TermPtr application) {
    return make(Term{TermKind::LamSubst, "", std::move(application), nullptr, {}, std::move(refs)});
}
TermPtr down_subst(RefValues refs, TermPtr body) {
    return make(Term{TermKind::DownSubst, "", std::move(body), nullptr, {}, std::move(refs)});
}
TermPtr up_subst(RefValues refs, TermPtr body) {
    return make(Term{TermKind::UpSubst, "", std::move(body), nullptr, {}, std::move(refs)});
}
TermPtr sum(TermPtr l, TermPtr r) { return make(Term{TermKind::Sum, "", std::move(l), std::move(r), {}, {}}); }

bool is_value(const Term& t) {
    return t.kind == TermKind::Var || t.kind == TermKind::Star || t.kind == TermKind::Lam;
}

bool is_source_term(const Term& t) {
    switch (t.kind) {
    case TermKind::Var:
    case TermKind::Star:
    case TermKind::Get:
        return true;
    case TermKind::Lam:
    case TermKind::Set:
    case TermKind::Store:
        return is_source_term(*t.a);
    case TermKind::App:
    case TermKind::Par:
        return is_source_term(*t.a) && is_source_term(*t.b);
    default:
        return false;
    }
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, Backslash, Dot, LParen, RParen, Star, Bar2, LeftArrow, LBracket, RBracket, Assign, Comma, Semi, Lt, Gt, Plus, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        std::size_t at = i;
        auto two = [&](std::string_view t) { return s.substr(i, 2) == t; };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && ident_char(s[i])) ++i;
            out.push_back({Tok::Ident, std::string(s.substr(at, i - at)), at});
            continue;
        }
        if (two("||")) { out.push_back({Tok::Bar2, "||", at}); i += 2; continue; }
        if (two("<=")) { out.push_back({Tok::LeftArrow, "<=", at}); i += 2; continue; }
        if (two(":=")) { out.push_back({Tok::Assign, ":=", at}); i += 2; continue; }
        Tok k;
        switch (c) {
        case '\\': k = Tok::Backslash; break;
        case '.': k = Tok::Dot; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '*': k = Tok::Star; break;
        case '[': k = Tok::LBracket; break;
        case ']': k = Tok::RBracket; break;
        case ',': k = Tok::Comma; break;
        case ';': k = Tok::Semi; break;
        case '<': k = Tok::Lt; break;
        case '>': k = Tok::Gt; break;
        case '+': k = Tok::Plus; break;
        default:
            throw ParseError(at, std::string("unexpected character '") + c + "'");
        }
        out.push_back({k, std::string(1, c), at});
        ++i;
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view s) : toks_(lex(s)) {}

    TermPtr program() {
        TermPtr t = sum_level();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return t;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& why) const { throw ParseError(peek().offset, why); }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        next();
    }
    std::string ident(const char* what) {
        if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail(std::string("expected ") + what);
        return next().text;
    }
    static bool is_keyword(const std::string& s) { return s == "get" || s == "set"; }
    bool at_prefix_keyword() const {
        return peek().kind == Tok::Ident && peek(1).kind == Tok::Lt &&
               (peek().text == "lam" || peek().text == "down" || peek().text == "up");
    }

    TermPtr sum_level() {
        TermPtr t = par_level();
        while (peek().kind == Tok::Plus) {
            next();
            t = sum(t, par_level());
        }
        return t;
    }

    TermPtr par_level() {
        TermPtr t = lam_level();
        while (peek().kind == Tok::Bar2) {
            next();
            t = par(t, lam_level());
        }
        return t;
    }

    TermPtr lambda() {
        expect(Tok::Backslash, "'\\'");
        std::string x = ident("a variable after '\\'");
        expect(Tok::Dot, "'.'");
        return lam(x, par_level());
    }

    TermPtr lam_level() {
        if (peek().kind == Tok::Backslash) return lambda();
        return app_level();
    }

    bool starts_atom() const {
        switch (peek().kind) {
        case Tok::Ident:
        case Tok::Star:
        case Tok::LParen:
        case Tok::LBracket:
            return true;
        default:
            return false;
        }
    }

    TermPtr app_level() {
        TermPtr t = atom();
        for (;;) {
            if (peek().kind == Tok::Backslash) return app(t, lambda());
            if (!starts_atom()) return t;
            t = app(t, atom());
        }
    }

    TermPtr value() {
        std::size_t at = peek().offset;
        TermPtr v = peek().kind == Tok::Backslash ? lambda() : atom();
        if (!is_value(*v)) throw ParseError(at, "expected a value");
        return v;
    }

    RefValues ref_list() {
        RefValues refs;
        expect(Tok::Lt, "'<'");
        while (peek().kind != Tok::Gt) {
            std::string r = ident("a reference");
            expect(Tok::Assign, "':='");
            auto& vs = refs[r];
            vs.push_back(value());
            while (peek().kind == Tok::Comma) {
                next();
                vs.push_back(value());
            }
            if (peek().kind == Tok::Semi) next();
            else break;
        }
        expect(Tok::Gt, "'>'");
        return refs;
    }

    TermPtr atom() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Star:
            next();
            return star();
        case Tok::LParen: {
            next();
            TermPtr inside = sum_level();
            expect(Tok::RParen, "')'");
            return inside;
        }
        case Tok::LBracket: {
            next();
            std::map<std::string, TermPtr> sigma;
            for (;;) {
                std::string x = ident("a variable");
                expect(Tok::Assign, "':='");
                sigma[x] = value();
                if (peek().kind != Tok::Comma) break;
                next();
            }
            expect(Tok::RBracket, "']'");
            return var_subst(std::move(sigma), atom());
        }
        case Tok::Ident: {
            if (t.text == "get") {
                next();
                return get(ident("a reference after 'get'"));
            }
            if (t.text == "set") {
                next();
                std::string r = ident("a reference after 'set'");
                return set(r, value());
            }
            if (at_prefix_keyword()) {
                std::string k = next().text;
                RefValues refs = ref_list();
                std::size_t at = peek().offset;
                TermPtr body = atom();
                if (k == "lam") {
                    if (body->kind != TermKind::App) throw ParseError(at, "expected an application");
                    return lam_subst(std::move(refs), body);
                }
                return k == "down" ? down_subst(std::move(refs), body) : up_subst(std::move(refs), body);
            }
            std::string x = next().text;
            if (peek().kind == Tok::LeftArrow) {
                next();
                return store(x, value());
            }
            return var(x);
        }
        case Tok::End:
            fail("unexpected end of input");
        default:
            fail("unexpected '" + t.text + "'");
        }
    }
};

// ---------------------------------------------------------------- printing

int natural_level(const Term& t) {
    switch (t.kind) {
    case TermKind::Sum: return 0;
    case TermKind::Par:
    case TermKind::Lam: return 1;
    case TermKind::App: return 2;
    default: return 3;
    }
}

std::string str(const Term& t, int level, bool tail);

std::string refs_str(const RefValues& refs) {
    std::string s = "<";
    bool first_ref = true;
    for (const auto& [r, vs] : refs) {
        if (!first_ref) s += "; ";
        first_ref = false;
        s += r + " := ";
        for (std::size_t k = 0; k < vs.size(); ++k) s += (k ? ", " : "") + str(*vs[k], 3, false);
    }
    return s + ">";
}

std::string body(const Term& t, int level, bool tail) {
    switch (t.kind) {
    case TermKind::Var: return t.name;
    case TermKind::Star: return "*";
    case TermKind::Lam: return "\\" + t.name + ". " + str(*t.a, 1, true);
    case TermKind::App: return str(*t.a, 2, false) + " " + str(*t.b, 3, false);
    case TermKind::Get: return "get " + t.name;
    case TermKind::Set: return "set " + t.name + " " + str(*t.a, 3, tail);
    case TermKind::Par: return str(*t.a, 1, false) + " || " + str(*t.b, 2, tail);
    case TermKind::Store: return t.name + " <= " + str(*t.a, 3, tail);
    case TermKind::Sum: return str(*t.a, 0, false) + " + " + str(*t.b, 1, tail);
    case TermKind::VarSubst: {
        std::string s = "[";
        bool first = true;
        for (const auto& [x, v] : t.sigma) {
            s += (first ? "" : ", ") + x + " := " + str(*v, 3, false);
            first = false;
        }
        return s + "] " + str(*t.a, 3, tail);
    }
    case TermKind::LamSubst: return "lam" + refs_str(t.refs) + " " + str(*t.a, 3, tail);
    case TermKind::DownSubst: return "down" + refs_str(t.refs) + " " + str(*t.a, 3, tail);
    case TermKind::UpSubst: return "up" + refs_str(t.refs) + " " + str(*t.a, 3, tail);
    }
    (void)level;
    return "";
}

std::string str(const Term& t, int level, bool tail) {
    int nat = natural_level(t);
    bool wrap = nat < level || (t.kind == TermKind::Lam && (!tail || level > 1));
    std::string s = body(t, level, tail || wrap);
    return wrap ? "(" + s + ")" : s;
}

}  // namespace

TermPtr parse_term(std::string_view text) { return Parser(text).program(); }

std::string print(const Term& t) { return str(t, 0, true); }

// ---------------------------------------------------------------- binding

std::set<std::string> free_vars(const Term& t) {
    std::set<std::string> out;
    std::function<void(const Term&, std::vector<std::string>&)> go = [&](const Term& u, std::vector<std::string>& bound) {
        auto is_bound = [&](const std::string& x) { return std::find(bound.begin(), bound.end(), x) != bound.end(); };
        switch (u.kind) {
        case TermKind::Var:
            if (!is_bound(u.name)) out.insert(u.name);
            break;
        case TermKind::Lam:
            bound.push_back(u.name);
            go(*u.a, bound);
            bound.pop_back();
            break;
        case TermKind::VarSubst:
            for (const auto& [x, v] : u.sigma) go(*v, bound);
            for (const auto& [x, v] : u.sigma) bound.push_back(x);
            go(*u.a, bound);
            bound.resize(bound.size() - u.sigma.size());
            break;
        default:
            for (const auto& [r, vs] : u.refs)
                for (const auto& v : vs) go(*v, bound);
            if (u.a) go(*u.a, bound);
            if (u.b) go(*u.b, bound);
        }
    };
    std::vector<std::string> bound;
    go(t, bound);
    return out;
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    for (int k = 1;; ++k) {
        std::string c = base + std::to_string(k);
        if (!avoid.count(c)) return c;
    }
}

}  // namespace

TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& v) {
    const Term& t = *m;
    switch (t.kind) {
    case TermKind::Var:
        return t.name == x ? v : m;
    case TermKind::Star:
    case TermKind::Get:
        return m;
    case TermKind::Lam: {
        if (t.name == x) return m;
        auto fv = free_vars(*v);
        if (fv.count(t.name)) {
            auto avoid = fv;
            auto inner = free_vars(*t.a);
            avoid.insert(inner.begin(), inner.end());
            avoid.insert(x);
            std::string y = fresh_name(t.name, avoid);
            TermPtr renamed = substitute(t.a, t.name, var(y));
            return lam(y, substitute(renamed, x, v));
        }
        return lam(t.name, substitute(t.a, x, v));
    }
    case TermKind::App: return app(substitute(t.a, x, v), substitute(t.b, x, v));
    case TermKind::Par: return par(substitute(t.a, x, v), substitute(t.b, x, v));
    case TermKind::Sum: return sum(substitute(t.a, x, v), substitute(t.b, x, v));
    case TermKind::Set: return set(t.name, substitute(t.a, x, v));
    case TermKind::Store: return store(t.name, substitute(t.a, x, v));
    default:
        throw Error(ErrorKind::Type, "substitution into explicit-substitution forms is not supported");
    }
}

std::string alpha_key(const Term& t) {
    std::string out;
    std::function<void(const Term&, std::vector<std::string>&)> go = [&](const Term& u, std::vector<std::string>& env) {
        auto refs = [&](const RefValues& rv) {
            out += "<";
            for (const auto& [r, vs] : rv) {
                out += r + ":";
                std::vector<std::string> keys;
                for (const auto& v : vs) {
                    std::string saved;
                    std::swap(saved, out);
                    go(*v, env);
                    std::swap(saved, out);
                    keys.push_back(saved);
                }
                std::sort(keys.begin(), keys.end());
                for (const auto& k : keys) out += k + ",";
                out += ";";
            }
            out += ">";
        };
        switch (u.kind) {
        case TermKind::Var: {
            auto it = std::find(env.rbegin(), env.rend(), u.name);
            if (it == env.rend()) out += "$" + u.name;
            else out += "#" + std::to_string(it - env.rbegin());
            break;
        }
        case TermKind::Star: out += "*"; break;
        case TermKind::Lam:
            out += "(\\ ";
            env.push_back(u.name);
            go(*u.a, env);
            env.pop_back();
            out += ")";
            break;
        case TermKind::App: out += "(@ "; go(*u.a, env); out += " "; go(*u.b, env); out += ")"; break;
        case TermKind::Get: out += "(get " + u.name + ")"; break;
        case TermKind::Set: out += "(set " + u.name + " "; go(*u.a, env); out += ")"; break;
        case TermKind::Par: out += "(|| "; go(*u.a, env); out += " "; go(*u.b, env); out += ")"; break;
        case TermKind::Store: out += "(<= " + u.name + " "; go(*u.a, env); out += ")"; break;
        case TermKind::Sum: out += "(+ "; go(*u.a, env); out += " "; go(*u.b, env); out += ")"; break;
        case TermKind::VarSubst:
            out += "([";
            for (const auto& [x, v] : u.sigma) {
                go(*v, env);
                out += ",";
            }
            out += "] ";
            for (const auto& [x, v] : u.sigma) env.push_back(x);
            go(*u.a, env);
            env.resize(env.size() - u.sigma.size());
            out += ")";
            break;
        case TermKind::LamSubst: out += "(lam"; refs(u.refs); go(*u.a, env); out += ")"; break;
        case TermKind::DownSubst: out += "(down"; refs(u.refs); go(*u.a, env); out += ")"; break;
        case TermKind::UpSubst: out += "(up"; refs(u.refs); go(*u.a, env); out += ")"; break;
        }
    };
    std::vector<std::string> env;
    go(t, env);
    return out;
}

std::vector<TermPtr> threads(const TermPtr& p) {
    std::vector<TermPtr> out;
    std::function<void(const TermPtr&)> go = [&](const TermPtr& t) {
        if (t->kind == TermKind::Par) {
            go(t->a);
            go(t->b);
        } else {
            out.push_back(t);
        }
    };
    go(p);
    return out;
}

}  // namespace routenet::lang
