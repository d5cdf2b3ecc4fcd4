// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace routenet::lang {

enum class TermKind {
    Var,
    Star,
    Lam,
    App,
    Get,
    Set,
    Par,
    Store,
    // intermediate language only
    VarSubst,
    LamSubst,
    DownSubst,
    UpSubst,
    Sum,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;
/** Reference name to a multiset of values. */
using RefValues = std::map<std::string, std::vector<TermPtr>>;

/**
 * One node of either language. `name` is the variable, binder or
 * reference; `a` and `b` are the children (Lam/Set/Store/subst bodies use
 * `a` only). Nodes are immutable and may be shared.
 */
struct Term {
    TermKind kind = TermKind::Star;
    std::string name;
    TermPtr a;
    TermPtr b;
    std::map<std::string, TermPtr> sigma;  // VarSubst
    RefValues refs;                        // LamSubst, DownSubst, UpSubst
};

TermPtr var(std::string x);
TermPtr star();
TermPtr lam(std::string x, TermPtr body);
TermPtr app(TermPtr f, TermPtr arg);
TermPtr get(std::string r);
TermPtr set(std::string r, TermPtr value);
TermPtr par(TermPtr left, TermPtr right);
TermPtr store(std::string r, TermPtr value);
TermPtr var_subst(std::map<std::string, TermPtr> sigma, TermPtr body);
TermPtr lam_subst(RefValues refs, TermPtr application);
TermPtr down_subst(RefValues refs, TermPtr body);
TermPtr up_subst(RefValues refs, TermPtr body);
TermPtr sum(TermPtr left, TermPtr right);

bool is_value(const Term& t);
/** Built from Var, Star, Lam, App, Get, Set, Par and Store only. */
bool is_source_term(const Term& t);

/**
 * Surface syntax: `\x. M` (the body extends as far as possible, over `||`
 * too), `M N`, `get r`, `set r V`, `M || N`, `r <= V`, `*`, parentheses and
 * `#` comments. Intermediate forms: `[x := V, ...] M`, `lam<r := V, W; s := U> (M N)`,
 * `down<...> M`, `up<...> M` and `M + N`. Throws ParseError.
 */
TermPtr parse_term(std::string_view text);
std::string print(const Term& t);

std::set<std::string> free_vars(const Term& t);
/** Capture-avoiding M[V/x]. */
TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& v);
/** Equal for alpha-equivalent terms, distinct otherwise. */
std::string alpha_key(const Term& t);

/** Leaves of the top-level `||` tree, left to right. */
std::vector<TermPtr> threads(const TermPtr& p);

}  // namespace routenet::lang
