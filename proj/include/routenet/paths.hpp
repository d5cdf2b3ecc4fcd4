// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "routenet/multirel.hpp"
#include "routenet/net.hpp"

namespace routenet {

/** Undirected graph on ports: one edge per wire, one edge per (auxiliary, principal) pair. */
struct PortGraph {
    std::vector<PortId> vertices;
    std::vector<std::pair<PortId, PortId>> wire_edges;
    std::vector<std::pair<PortId, PortId>> cell_edges;
};

PortGraph build_graph(const Net& n);

/** True iff no path alternating wire and cell edges returns to its first port. */
bool check_acyclic(const Net& n);

/**
 * Alternating paths from free port i to free port o that start and end on
 * wire edges. count_paths memoizes over (port, last edge kind); the DFS
 * variant enumerates paths one by one. Both throw CyclicNet on cyclic nets.
 */
Count count_paths(const Net& n, PortId i, PortId o);
Count count_paths_dfs(const Net& n, PortId i, PortId o);

/** True when the formula read away from free port p is a !-formula (p feeds the net). */
bool is_input_port(const Net& n, PortId p);

}  // namespace routenet
