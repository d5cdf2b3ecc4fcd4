// SPDX-License-Identifier: Apache-2.0
#include "routenet/paths.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "routenet/errors.hpp"

namespace routenet {

namespace {

void require_box_free(const Net& n) {
    if (n.has_boxes()) throw Error(ErrorKind::HasBoxes, "path machinery needs a net without boxes");
}

/** Adjacency by edge kind. */
struct Adjacency {
    std::unordered_map<PortId, PortId> wire;
    std::unordered_map<PortId, std::vector<PortId>> cell;

    explicit Adjacency(const Net& n) {
        for (const auto& w : n.wires) {
            wire[w.a] = w.b;
            wire[w.b] = w.a;
        }
        for (const auto& c : n.cells) {
            for (PortId a : c.aux) {
                cell[a].push_back(c.principal);
                cell[c.principal].push_back(a);
            }
        }
    }

    const std::vector<PortId>& cells_of(PortId p) const {
        static const std::vector<PortId> none;
        auto it = cell.find(p);
        return it == cell.end() ? none : it->second;
    }
};

// State: a port together with the kind of the edge that reached it
// (0 = wire, 1 = cell). The next edge must be of the other kind.
using State = std::pair<PortId, int>;

}  // namespace

PortGraph build_graph(const Net& n) {
    require_box_free(n);
    PortGraph g;
    for (const auto& f : n.free) g.vertices.push_back(f.port);
    for (const auto& c : n.cells) {
        g.vertices.push_back(c.principal);
        for (PortId a : c.aux) {
            g.vertices.push_back(a);
            g.cell_edges.emplace_back(a, c.principal);
        }
    }
    for (const auto& w : n.wires) g.wire_edges.emplace_back(w.a, w.b);
    std::sort(g.vertices.begin(), g.vertices.end());
    return g;
}

bool check_acyclic(const Net& n) {
    require_box_free(n);
    Adjacency adj(n);
    PortGraph g = build_graph(n);
    for (PortId start : g.vertices) {
        std::set<State> seen;
        std::vector<State> stack;
        auto push = [&](State s) {
            if (seen.insert(s).second) stack.push_back(s);
        };
        auto wit = adj.wire.find(start);
        if (wit != adj.wire.end()) push({wit->second, 0});
        for (PortId q : adj.cells_of(start)) push({q, 1});
        while (!stack.empty()) {
            auto [p, kind] = stack.back();
            stack.pop_back();
            if (p == start) return false;
            if (kind == 0) {
                for (PortId q : adj.cells_of(p)) push({q, 1});
            } else {
                auto w = adj.wire.find(p);
                if (w != adj.wire.end()) push({w->second, 0});
            }
        }
    }
    return true;
}

Count count_paths(const Net& n, PortId i, PortId o) {
    require_box_free(n);
    if (!check_acyclic(n)) throw Error(ErrorKind::CyclicNet, "count_paths on a cyclic net");
    Adjacency adj(n);
    std::map<State, Count> memo;
    // Number of ways to finish at o, having reached p through an edge of the given kind.
    std::function<Count(PortId, int)> go = [&](PortId p, int kind) -> Count {
        auto key = State{p, kind};
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Count total = 0;
        if (kind == 0) {
            if (p == o) total = 1;
            else
                for (PortId q : adj.cells_of(p)) total = checked_add(total, go(q, 1));
        } else {
            auto w = adj.wire.find(p);
            if (w != adj.wire.end()) total = go(w->second, 0);
        }
        memo.emplace(key, total);
        return total;
    };
    auto w = adj.wire.find(i);
    if (w == adj.wire.end()) return 0;
    return go(w->second, 0);
}

Count count_paths_dfs(const Net& n, PortId i, PortId o) {
    require_box_free(n);
    if (!check_acyclic(n)) throw Error(ErrorKind::CyclicNet, "count_paths on a cyclic net");
    Adjacency adj(n);
    Count found = 0;
    std::vector<State> stack;
    auto w = adj.wire.find(i);
    if (w == adj.wire.end()) return 0;
    stack.push_back({w->second, 0});
    while (!stack.empty()) {
        auto [p, kind] = stack.back();
        stack.pop_back();
        if (kind == 0) {
            if (p == o) {
                found = checked_add(found, 1);
                continue;
            }
            for (PortId q : adj.cells_of(p)) stack.push_back({q, 1});
        } else {
            auto x = adj.wire.find(p);
            if (x != adj.wire.end()) stack.push_back({x->second, 0});
        }
    }
    return found;
}

bool is_input_port(const Net& n, PortId p) {
    for (const auto& w : n.wires) {
        if (w.a == p) return w.type.is_bang();
        if (w.b == p) return w.type.dual().is_bang();
    }
    return false;
}

}  // namespace routenet
