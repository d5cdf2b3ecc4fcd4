// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "routenet/multirel.hpp"
#include "routenet/net.hpp"

namespace oracle {

using Entries = std::map<std::pair<std::string, std::string>, std::uint64_t>;

Entries entries(const routenet::Multirelation& r);

/** Counts two-edge walks x -> y -> z in the multigraph with r(x,y) and s(y,z) parallel edges. */
Entries walk_compose(const routenet::Multirelation& r, const routenet::Multirelation& s);

/**
 * Counts walks from inputs to outputs in the multigraph of r where output o
 * is joined back to input i, stopping at the first output other than o.
 */
Entries walk_trace(const routenet::Multirelation& r, const std::string& i, const std::string& o);

/**
 * Alternating paths between two free ports of a box-free net, enumerated
 * without any orientation information. Self-contained: does not use the
 * library's path module.
 */
std::uint64_t alternating_paths(const routenet::Net& n, routenet::PortId from, routenet::PortId to);

/** Matrix of alternating path counts between wire-source and wire-target free ports. */
Entries path_matrix(const routenet::Net& n);

routenet::Net free_wire(routenet::Formula f, const std::string& in = "i", const std::string& out = "o");

}  // namespace oracle
