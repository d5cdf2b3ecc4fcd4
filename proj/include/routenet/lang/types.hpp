// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "routenet/lang/term.hpp"

namespace routenet::lang {

using Effect = std::set<std::string>;

enum class TypeKind { Unit, Behavior, Arrow, Reg };

struct TypeExpr;
using TypePtr = std::shared_ptr<const TypeExpr>;

/**
 * Unit; Behavior, optionally with the types of its two threads; Arrow
 * `arg -{effect}> res`; Reg `reg` of `arg`.
 */
struct TypeExpr {
    TypeKind kind = TypeKind::Unit;
    TypePtr arg;
    TypePtr res;
    Effect effect;
    std::string reg;
};

TypePtr unit_type();
TypePtr behavior_type(TypePtr left = nullptr, TypePtr right = nullptr);
TypePtr arrow_type(TypePtr arg, Effect e, TypePtr res);
TypePtr reg_type(std::string r, TypePtr a);

/** Structural equality; a Behavior without thread types matches any Behavior. */
bool type_equal(const TypeExpr& a, const TypeExpr& b);
std::string print(const TypeExpr& t);
std::string print(const Effect& e);
/** `Unit`, `B`, `A -{r,s}> B` (also `A -> B`), `Reg r A`, parentheses. */
TypePtr parse_type(std::string_view text);

/** Eff(A): the references mentioned in latent effects anywhere in A. */
Effect latent_refs(const TypeExpr& t);

struct RegionCtx {
    std::vector<std::pair<std::string, TypePtr>> entries;

    TypePtr find(const std::string& r) const;
    bool contains(const std::string& r) const { return find(r) != nullptr; }
};

/** One `r : <type>` per line; blank lines and `#` comments are skipped. */
RegionCtx parse_region_ctx(std::string_view text);

using VarCtx = std::vector<std::pair<std::string, TypePtr>>;

struct Stratification {
    bool ok = false;
    std::vector<std::string> order;  // lowest first, when ok
    std::string reason;
};

Stratification check_stratified(const RegionCtx& r);

struct Judgement {
    TypePtr type;
    Effect effect;
};

/**
 * A type-and-effect assignment for every node of a term. Latent effects of
 * arrows are solved as the least sets satisfying the (lam) and (sub)
 * constraints; unconstrained type variables default to Unit.
 */
struct Derivation {
    TermPtr term;
    Judgement result;
    std::unordered_map<const Term*, Judgement> nodes;
    std::vector<std::string> relaxations;

    /** Throws DerivationMismatch for nodes outside the derivation. */
    const Judgement& at(const Term& t) const;
};

/** Throws NotStratified, or Type naming the failing rule. */
Derivation typecheck_amadio(const RegionCtx& r, const VarCtx& g, const TermPtr& m, TypePtr expected = nullptr);
/**
 * Intermediate-language checker. (subst-r) entries whose reference lies
 * outside the body's effect are accepted when the reference is in dom(R),
 * and listed in `relaxations`.
 */
Derivation typecheck_lthis(const RegionCtx& r, const VarCtx& g, const TermPtr& m, TypePtr expected = nullptr);

/** (alpha, e) <= (alpha', e') under effect containment. */
bool subtype(const TypeExpr& a, const Effect& e, const TypeExpr& b, const Effect& f);

}  // namespace routenet::lang
