// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <random>

#include "routenet/multirel.hpp"
#include "routenet/net.hpp"

namespace routenet {

using Rng = std::mt19937_64;

/** Uniform in [0, n); plain modulo so sequences are identical across standard libraries. */
std::size_t uniform(Rng& g, std::size_t n);

/** Inputs i1.., outputs o1..; at least one of each. */
Multirelation random_area(Rng& g, std::size_t max_in, std::size_t max_out, Count max_entry);

/** The payload formula of routing nets, !1. */
Formula routing_payload();

/**
 * An acyclic net of (co)contractions and (co)weakenings over !1, grown from
 * inputs i1.. and closed off with outputs o1...
 */
Net random_routing_net(Rng& g, std::size_t max_cells);

/**
 * A well-typed net with cuts of every rule, including boxes with doors and
 * in-box cuts. Free ports are labelled f1...
 */
Net random_valid_net(Rng& g, std::size_t max_cells);

}  // namespace routenet
