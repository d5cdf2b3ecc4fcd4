// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace oracle {

using namespace routenet;

Entries entries(const Multirelation& r) {
    Entries e;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            if (r.at(i, j)) e[{r.domain()[i], r.codomain()[j]}] = r.at(i, j);
    return e;
}

namespace {

struct Edge {
    std::string from, to;
};

std::vector<Edge> edges_of(const Multirelation& r, const std::string& pre_in, const std::string& pre_out) {
    std::vector<Edge> es;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            for (Count k = 0; k < r.at(i, j); ++k) es.push_back({pre_in + r.domain()[i], pre_out + r.codomain()[j]});
    return es;
}

}  // namespace

Entries walk_compose(const Multirelation& r, const Multirelation& s) {
    auto e1 = edges_of(r, "", "");
    auto e2 = edges_of(s, "", "");
    Entries out;
    for (const auto& a : e1)
        for (const auto& b : e2)
            if (a.to == b.from) ++out[{a.from, b.to}];
    return out;
}

Entries walk_trace(const Multirelation& r, const std::string& i, const std::string& o) {
    auto es = edges_of(r, "", "");
    Entries out;
    for (const auto& a : es) {
        if (a.from == i) continue;
        if (a.to != o) {
            ++out[{a.from, a.to}];
            continue;
        }
        for (const auto& b : es) {
            if (b.from != i) continue;
            if (b.to == o) throw std::logic_error("trace oracle: feedback loop");
            ++out[{a.from, b.to}];
        }
    }
    return out;
}

std::uint64_t alternating_paths(const Net& n, PortId from, PortId to) {
    std::map<PortId, PortId> wire;
    for (const auto& w : n.wires) {
        wire[w.a] = w.b;
        wire[w.b] = w.a;
    }
    std::map<PortId, std::vector<PortId>> cell_edge;
    for (const auto& c : n.cells) {
        if (c.inner) throw std::logic_error("oracle expects a box-free net");
        for (PortId a : c.aux) {
            cell_edge[a].push_back(c.principal);
            cell_edge[c.principal].push_back(a);
        }
    }
    std::set<PortId> on_path;
    std::function<std::uint64_t(PortId)> after_wire = [&](PortId p) -> std::uint64_t {
        // p was just reached through a wire edge
        if (p == to) return 1;
        std::uint64_t total = 0;
        auto it = cell_edge.find(p);
        if (it == cell_edge.end()) return 0;
        for (PortId q : it->second) {
            if (on_path.count(q)) continue;
            auto w = wire.find(q);
            if (w == wire.end() || on_path.count(w->second)) continue;
            on_path.insert(q);
            on_path.insert(w->second);
            total += after_wire(w->second);
            on_path.erase(q);
            on_path.erase(w->second);
        }
        return total;
    };
    on_path.insert(from);
    PortId first = wire.at(from);
    on_path.insert(first);
    return after_wire(first);
}

Entries path_matrix(const Net& n) {
    PortTable t = index_ports(n);
    std::vector<const FreePort*> ins, outs;
    for (const auto& f : n.free) {
        const Wire& w = n.wires[t.at(f.port).wire];
        Formula away = w.a == f.port ? w.type : w.type.dual();
        (away.is_bang() ? ins : outs).push_back(&f);
    }
    Entries e;
    for (auto* i : ins)
        for (auto* o : outs) {
            auto k = alternating_paths(n, i->port, o->port);
            if (k) e[{i->label, o->label}] += k;
        }
    return e;
}

Net free_wire(Formula f, const std::string& in, const std::string& out) {
    NetEditor ed;
    PortId a = ed.add_free(in);
    PortId b = ed.add_free(out);
    ed.connect(a, b, f);
    return ed.build();
}

}  // namespace oracle
