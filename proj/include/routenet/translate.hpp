// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "routenet/formula.hpp"
#include "routenet/lang/eval.hpp"
#include "routenet/lang/types.hpp"
#include "routenet/net.hpp"
#include "routenet/rewrite.hpp"

namespace routenet {

/**
 * Value types to formulas: Unit is !1, a function A -{s1..sm}> a is
 * !(I^ % O) with I = A * !X_s1 * .. * !X_sm and O = !X_s1 * .. * !X_sm * a
 * (both left-nested, references in name order), where X_r is the formula of
 * r's declared type. A behaviour with known threads is the par of their
 * formulas. Throws NotStratified, or DerivationMismatch for a bare B or Reg.
 */
Formula translate_type(const lang::TypeExpr& t, const lang::RegionCtx& r);
/** !X_r, the formula carried by r's reference wires. */
Formula reference_formula(const std::string& ref, const lang::RegionCtx& r);

/**
 * Free port labels of a translated term: "ret" produces the value,
 * "var:x" consumes x, "rin:r" consumes what r may hold on entry and
 * "rout:r" produces what r may hold afterwards.
 */
struct NetInterface {
    std::string output = "ret";
    std::map<std::string, Formula> vars;
    std::map<std::string, Formula> ref_in;
    std::map<std::string, Formula> ref_out;
};

struct Translation {
    Net net;
    NetInterface interface;
    lang::TypePtr type;
    lang::Effect effect;
};

/**
 * Net of the derivation's term. `gamma` gives the types of free variables
 * not bound in the term. Throws DerivationMismatch on store or sum nodes
 * and on judgements the wiring cannot honour.
 */
Translation translate(const lang::Derivation& d, const lang::RegionCtx& r, const lang::VarCtx& gamma = {});

/**
 * Caps every rin with a coweakening and every rout with a weakening.
 * Throws InterfaceMismatch unless the reference ports are exactly `e` and
 * no variable port remains.
 */
Net close(const Translation& t, const lang::Effect& e);
Net close(const Translation& t);

/** close(translate(embedding of the program under its own store)). */
Net compile(const lang::RegionCtx& r, const lang::TermPtr& program);

/**
 * Recognises the value summands of a program's compiled normal form:
 * the normal forms of compile(T) for every outcome T of the program.
 */
class ValueMatcher {
public:
    ValueMatcher(const lang::RegionCtx& r, const lang::TermPtr& program, std::size_t budget = kDefaultBudget);

    const std::vector<lang::Outcome>& outcomes() const { return outcomes_; }
    /** Outcome index of a normal net, or -1 for garbage. */
    int match(const Net& n) const;
    bool is_value_net(const Net& n) const { return match(n) >= 0; }
    /** Canonical keys of the value net(s) of outcome k. */
    const std::vector<std::string>& keys(std::size_t k) const { return keys_[k]; }

private:
    std::vector<lang::Outcome> outcomes_;
    std::vector<std::vector<std::string>> keys_;
    std::map<std::string, int> index_;
};

}  // namespace routenet
