// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "routenet/lang/types.hpp"
#include "routenet/random.hpp"

namespace routenet::lang {

struct RandomProgram {
    RegionCtx regions;
    TermPtr program;
};

/**
 * A closed program over at most `max_refs` references, well typed by
 * construction: terms are grown top-down from the typing rules, never
 * deeper than `max_depth`. Threads are followed by a few random stores.
 */
RandomProgram random_program(Rng& g, std::size_t max_depth = 5, std::size_t max_refs = 2);

}  // namespace routenet::lang
