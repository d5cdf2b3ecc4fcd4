// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "routenet/lang/term.hpp"

namespace routenet::lang {

enum class StepRule { Beta, Get, Set };

const char* to_string(StepRule r);

struct Step {
    StepRule rule;
    TermPtr result;
};

/**
 * Every one-step reduct of a program, each tagged with the rule used.
 * Reducts equal up to alpha-equivalence and reassociation or commutation
 * of `||` are reported once.
 */
std::vector<Step> steps(const TermPtr& p);
std::vector<TermPtr> step(const TermPtr& p);

/** Alpha-equivalence key that ignores the bracketing and order of `||`. */
std::string program_key(const Term& p);

/** Store threads of a program, as reference to values (in thread order). */
RefValues store_of(const TermPtr& p);
/** The program with its store threads removed; `nullptr` if nothing remains. */
TermPtr strip_stores(const TermPtr& p);

struct Outcome {
    /** Sorted alpha-keys of the value threads. */
    std::string key;
    /** A normal form with stores removed; keeps the program's `||` shape. */
    TermPtr representative;
    std::vector<TermPtr> values;
};

/**
 * The distinct multisets of thread values reachable from `p`, compared up to
 * alpha-equivalence with stores stripped. `budget` bounds the number of
 * explored states; exceeding it throws BudgetExhausted.
 */
std::vector<Outcome> values(const TermPtr& p, std::size_t budget = 10000);

/** The intermediate-language term for `m` running against store values `vs`. */
TermPtr embed_lthis(const TermPtr& m, const RefValues& vs);
/** embed_lthis of a program's non-store part under its own store. */
TermPtr embed_program(const TermPtr& p);

}  // namespace routenet::lang
