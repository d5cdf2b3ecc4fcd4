// SPDX-License-Identifier: Apache-2.0
#include "routenet/random.hpp"

#include <optional>

namespace routenet {

std::size_t uniform(Rng& g, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(g() % n); }

Multirelation random_area(Rng& g, std::size_t max_in, std::size_t max_out, Count max_entry) {
    std::size_t ni = 1 + uniform(g, max_in), no = 1 + uniform(g, max_out);
    LabelSet in, out;
    for (std::size_t i = 1; i <= ni; ++i) in.push_back("i" + std::to_string(i));
    for (std::size_t j = 1; j <= no; ++j) out.push_back("o" + std::to_string(j));
    Multirelation r(in, out);
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < no; ++j) r.set(i, j, uniform(g, max_entry + 1));
    return r;
}

Formula routing_payload() { return Formula::bang(Formula::one()); }

Net random_routing_net(Rng& g, std::size_t max_cells) {
    const Formula A = routing_payload();
    NetEditor ed;
    std::vector<PortId> open;  // emitting ports waiting for a receiver
    std::size_t inputs = 1 + uniform(g, 3);
    for (std::size_t i = 1; i <= inputs; ++i) open.push_back(ed.add_free("i" + std::to_string(i)));
    auto take = [&]() {
        std::size_t k = uniform(g, open.size());
        PortId p = open[k];
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
        return p;
    };
    std::size_t cells = uniform(g, max_cells + 1);
    for (std::size_t n = 0; n < cells; ++n) {
        std::size_t pick = uniform(g, 10);
        if (open.empty()) pick = 9;
        if (pick < 4) {
            CellId c = ed.add_cell(Symbol::Contraction, 2);
            ed.connect(take(), ed.cell(c).principal, A);
            open.push_back(ed.cell(c).aux[0]);
            open.push_back(ed.cell(c).aux[1]);
        } else if (pick < 7 && open.size() >= 2) {
            CellId c = ed.add_cell(Symbol::Cocontraction, 2);
            ed.connect(take(), ed.cell(c).aux[0], A);
            ed.connect(take(), ed.cell(c).aux[1], A);
            open.push_back(ed.cell(c).principal);
        } else if (pick < 8) {
            CellId c = ed.add_cell(Symbol::Weakening, 0);
            ed.connect(take(), ed.cell(c).principal, A);
        } else {
            CellId c = ed.add_cell(Symbol::Coweakening, 0);
            open.push_back(ed.cell(c).principal);
        }
    }
    std::size_t k = 0;
    for (PortId p : open) {
        PortId o = ed.add_free("o" + std::to_string(++k));
        ed.connect(p, o, A);
    }
    return ed.build();
}

namespace {

struct End {
    PortId port;
    Formula out;  // read away from the port
};

Formula one() { return Formula::one(); }
Formula bang(Formula f) { return Formula::bang(f); }

std::shared_ptr<const Net> box_of_one() {
    NetEditor in;
    PortId f = in.add_free("");
    CellId c = in.add_cell(Symbol::One, 0);
    in.connect(in.cell(c).principal, f, one());
    return std::make_shared<const Net>(in.build());
}

/** Inner net whose principal is another closed box: the box is !!1. */
std::shared_ptr<const Net> box_of_box() {
    NetEditor in;
    PortId f = in.add_free("");
    CellId b = in.add_cell(Symbol::Box, 0, box_of_one());
    in.connect(in.cell(b).principal, f, bang(one()));
    return std::make_shared<const Net>(in.build());
}

/** Inner cut der/box: the box is !1 and opens at depth 1. */
std::shared_ptr<const Net> box_with_e_cut() {
    NetEditor in;
    PortId f = in.add_free("");
    CellId b = in.add_cell(Symbol::Box, 0, box_of_one());
    CellId d = in.add_cell(Symbol::Dereliction, 1);
    in.connect(in.cell(b).principal, in.cell(d).principal, bang(one()));
    in.connect(in.cell(d).aux[0], f, one());
    return std::make_shared<const Net>(in.build());
}

/** One plus an erasable box: the box is !1. */
std::shared_ptr<const Net> box_with_er_cut() {
    NetEditor in;
    PortId f = in.add_free("");
    CellId o = in.add_cell(Symbol::One, 0);
    in.connect(in.cell(o).principal, f, one());
    CellId b = in.add_cell(Symbol::Box, 0, box_of_one());
    CellId w = in.add_cell(Symbol::Weakening, 0);
    in.connect(in.cell(b).principal, in.cell(w).principal, bang(one()));
    return std::make_shared<const Net>(in.build());
}

/** One door of type !1 passed to the principal through a contraction: the box is !!1. */
std::shared_ptr<const Net> box_with_door() {
    NetEditor in;
    PortId f0 = in.add_free("");
    PortId f1 = in.add_free("");
    CellId c = in.add_cell(Symbol::Contraction, 2);
    CellId w = in.add_cell(Symbol::Weakening, 0);
    in.connect(f1, in.cell(c).principal, bang(one()));
    in.connect(in.cell(c).aux[0], f0, bang(one()));
    in.connect(in.cell(c).aux[1], in.cell(w).principal, bang(one()));
    return std::make_shared<const Net>(in.build());
}

}  // namespace

Net random_valid_net(Rng& g, std::size_t max_cells) {
    NetEditor ed;
    std::vector<End> open;
    std::size_t budget = 1 + uniform(g, max_cells);
    std::size_t used = 0;
    auto emit = [&](PortId p, Formula f) { open.push_back(End{p, f}); };
    auto take_if = [&](auto pred) -> std::optional<End> {
        std::vector<std::size_t> ok;
        for (std::size_t i = 0; i < open.size(); ++i)
            if (pred(open[i].out)) ok.push_back(i);
        if (ok.empty()) return std::nullopt;
        std::size_t k = ok[uniform(g, ok.size())];
        End e = open[k];
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
        return e;
    };
    auto is_bang = [](Formula f) { return f.is_bang(); };

    for (int guard = 0; used < budget && guard < 200; ++guard) {
        std::size_t room = budget - used;
        switch (uniform(g, 12)) {
        case 0: {
            CellId c = ed.add_cell(Symbol::One, 0);
            emit(ed.cell(c).principal, one());
            used += 1;
            break;
        }
        case 1: {
            // closed boxes of several shapes
            if (room < 2) break;
            std::shared_ptr<const Net> inner;
            Formula t = bang(one());
            std::size_t cost = 2;
            switch (uniform(g, 4)) {
            case 0: inner = box_of_one(); break;
            case 1: if (room < 3) continue; inner = box_of_box(); t = bang(bang(one())); cost = 3; break;
            case 2: if (room < 4) continue; inner = box_with_e_cut(); cost = 4; break;
            default: if (room < 5) continue; inner = box_with_er_cut(); cost = 5; break;
            }
            CellId b = ed.add_cell(Symbol::Box, 0, inner);
            emit(ed.cell(b).principal, t);
            used += cost;
            break;
        }
        case 2: {
            auto e = take_if(is_bang);
            if (!e) break;
            CellId d = ed.add_cell(Symbol::Dereliction, 1);
            ed.connect(e->port, ed.cell(d).principal, e->out);
            emit(ed.cell(d).aux[0], e->out.left());
            used += 1;
            break;
        }
        case 3: {
            auto e = take_if(is_bang);
            if (!e) break;
            CellId c = ed.add_cell(Symbol::Contraction, 2);
            ed.connect(e->port, ed.cell(c).principal, e->out);
            emit(ed.cell(c).aux[0], e->out);
            emit(ed.cell(c).aux[1], e->out);
            used += 1;
            break;
        }
        case 4: {
            auto e = take_if(is_bang);
            if (!e) break;
            CellId w = ed.add_cell(Symbol::Weakening, 0);
            ed.connect(e->port, ed.cell(w).principal, e->out);
            used += 1;
            break;
        }
        case 5: {
            auto a = take_if(is_bang);
            if (!a) break;
            Formula t = a->out;
            auto b = take_if([t](Formula f) { return f == t; });
            if (!b) { open.push_back(*a); break; }
            CellId k = ed.add_cell(Symbol::Cocontraction, 2);
            ed.connect(a->port, ed.cell(k).aux[0], t);
            ed.connect(b->port, ed.cell(k).aux[1], t);
            emit(ed.cell(k).principal, t);
            used += 1;
            break;
        }
        case 6: {
            CellId k = ed.add_cell(Symbol::Coweakening, 0);
            emit(ed.cell(k).principal, uniform(g, 3) == 0 ? bang(bang(one())) : bang(one()));
            used += 1;
            break;
        }
        case 7: {
            if (open.size() < 2) break;
            auto a = take_if([](Formula) { return true; });
            auto b = take_if([](Formula) { return true; });
            CellId t = ed.add_cell(Symbol::Tensor, 2);
            ed.connect(a->port, ed.cell(t).aux[0], a->out);
            ed.connect(b->port, ed.cell(t).aux[1], b->out);
            emit(ed.cell(t).principal, Formula::tensor(a->out, b->out));
            used += 1;
            break;
        }
        case 8: {
            auto e = take_if([](Formula f) { return f.kind() == Formula::Kind::Tensor; });
            if (!e) break;
            CellId p = ed.add_cell(Symbol::Par, 2);
            ed.connect(e->port, ed.cell(p).principal, e->out);
            emit(ed.cell(p).aux[0], e->out.left());
            emit(ed.cell(p).aux[1], e->out.right());
            used += 1;
            break;
        }
        case 9: {
            auto e = take_if([](Formula f) { return f == bang(one()); });
            if (!e) break;
            CellId b = ed.add_cell(Symbol::Box, 1, box_with_door());
            ed.connect(e->port, ed.cell(b).aux[0], e->out);
            emit(ed.cell(b).principal, bang(bang(one())));
            used += 1;
            break;
        }
        default: {
            // a dereliction or weakening standing alone, exposing a ?-end
            bool der = uniform(g, 2) == 1;
            CellId d = ed.add_cell(der ? Symbol::Dereliction : Symbol::Weakening, der ? 1 : 0);
            emit(ed.cell(d).principal, Formula::whynot(Formula::bottom()));
            if (der) emit(ed.cell(d).aux[0], one());
            used += 1;
            break;
        }
        }
    }
    // Pair some dual ends into cuts, then expose the rest.
    for (std::size_t i = 0; i < open.size(); ++i) {
        for (std::size_t j = i + 1; j < open.size(); ++j) {
            if (open[i].out.dual() == open[j].out && uniform(g, 2)) {
                ed.connect(open[i].port, open[j].port, open[i].out);
                open.erase(open.begin() + static_cast<std::ptrdiff_t>(j));
                open.erase(open.begin() + static_cast<std::ptrdiff_t>(i));
                --i;
                break;
            }
        }
    }
    std::size_t k = 0;
    for (const End& e : open) {
        PortId f = ed.add_free("f" + std::to_string(++k));
        ed.connect(e.port, f, e.out);
    }
    return ed.build();
}

}  // namespace routenet
