// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "routenet/lang/types.hpp"
#include "routenet/rewrite.hpp"

namespace routenet {

/** A closed, well-typed program with its reference declarations. */
struct SuiteProgram {
    std::string name;
    std::string regions;
    std::string program;
};

/** Fixed programs exercising beta, get, set, stores and threads. */
const std::vector<SuiteProgram>& program_suite();

struct SimulationResult {
    bool ok = true;
    std::size_t steps_checked = 0;
    std::vector<std::string> failures;
};

/**
 * For every one-step reduct N of P, the normal form of compile(N) must be
 * contained in the normal form of compile(P).
 */
SimulationResult check_simulation(const lang::RegionCtx& r, const lang::TermPtr& p, std::size_t budget = kDefaultBudget);

struct AdequacyResult {
    bool ok = true;
    std::size_t outcomes = 0;
    std::size_t value_summands = 0;
    std::size_t garbage = 0;
    std::string detail;
};

/** Value summands of the compiled normal form must biject with values(P). */
AdequacyResult check_adequacy(const lang::RegionCtx& r, const lang::TermPtr& p, std::size_t budget = kDefaultBudget);

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t cases = 0;
    std::size_t passed = 0;
    std::vector<std::string> failures;  // "case k: reason", in case order
};

/**
 * Runs one verification suite: trace, compose, paths, simulate or
 * adequacy. Case k draws from its own generator seeded with seed + k.
 * Throws DomainMismatch for an unknown suite name.
 */
SuiteReport run_suite(const std::string& suite, std::uint64_t seed, std::size_t cases, std::size_t budget = kDefaultBudget);

}  // namespace routenet
