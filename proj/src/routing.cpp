// SPDX-License-Identifier: Apache-2.0
#include "routenet/routing.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "routenet/canon.hpp"
#include "routenet/errors.hpp"
#include "routenet/paths.hpp"

namespace routenet {

namespace {

/**
 * Left comb of `leaves` >= 2 binary cells of kind s. Returns the root
 * principal and the leaf auxiliaries in order. Internal wires are read
 * from the side nearer the inputs.
 */
std::pair<PortId, std::vector<PortId>> comb(NetEditor& ed, Symbol s, Count leaves, Formula A) {
    std::vector<PortId> out;
    CellId prev = ed.add_cell(s, 2);
    out.push_back(ed.cell(prev).aux[0]);
    out.push_back(ed.cell(prev).aux[1]);
    for (Count k = 2; k < leaves; ++k) {
        CellId c = ed.add_cell(s, 2);
        if (s == Symbol::Contraction)
            ed.connect(ed.cell(c).aux[0], ed.cell(prev).principal, A);
        else
            ed.connect(ed.cell(prev).principal, ed.cell(c).aux[0], A);
        out.push_back(ed.cell(c).aux[1]);
        prev = c;
    }
    return {ed.cell(prev).principal, out};
}

std::vector<std::size_t> label_order(const LabelSet& labels) {
    std::vector<std::size_t> idx(labels.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return labels[x] < labels[y]; });
    return idx;
}

struct WireIndex {
    std::unordered_map<PortId, std::pair<PortId, Formula>> to;  // port -> (partner, formula read away)

    explicit WireIndex(const Net& n) {
        for (const auto& w : n.wires) {
            to.emplace(w.a, std::make_pair(w.b, w.type));
            to.emplace(w.b, std::make_pair(w.a, w.type.dual()));
        }
    }
    bool has(PortId p) const { return to.count(p) != 0; }
    PortId partner(PortId p) const { return to.at(p).first; }
    Formula away(PortId p) const { return to.at(p).second; }
};

PortId find_oriented(const Net& n, const std::string& label, bool input) {
    WireIndex w(n);
    for (const auto& f : n.free) {
        if (f.label != label || !w.has(f.port)) continue;
        if (w.away(f.port).is_bang() == input) return f.port;
    }
    throw Error(ErrorKind::UnknownLabel, std::string(input ? "no input " : "no output ") + "labelled '" + label + "'");
}

LabelSet oriented_labels(const Net& n, bool input) {
    WireIndex w(n);
    LabelSet out;
    for (const auto& f : n.free)
        if (w.has(f.port) && w.away(f.port).is_bang() == input) out.push_back(f.label);
    std::sort(out.begin(), out.end());
    return out;
}

[[noreturn]] void not_area(const std::string& why) { throw Error(ErrorKind::NotAreaShaped, why); }

Net single_summand(const NetSum& s, const char* what) {
    if (s.summands.size() != 1)
        not_area(std::string(what) + " normalized to " + std::to_string(s.summands.size()) + " summands");
    return s.summands.front();
}

}  // namespace

Net build_area(const Multirelation& r) { return build_area(RoutingArea{r}); }

Net build_area(const RoutingArea& a) {
    const Multirelation& r = a.rel;
    const Formula A = a.payload_type;
    NetEditor ed;
    auto ins = label_order(r.domain());
    auto outs = label_order(r.codomain());

    std::vector<PortId> in_port(r.rows()), out_port(r.cols());
    for (std::size_t i : ins) in_port[i] = ed.add_free(r.domain()[i]);
    for (std::size_t o : outs) out_port[o] = ed.add_free(r.codomain()[o]);

    // Emitters per input, receivers per output, each in label order of the far side.
    std::vector<std::vector<PortId>> emit(r.rows()), recv(r.cols());
    for (std::size_t i = 0; i < r.rows(); ++i) {
        Count ar = 0;
        for (std::size_t o = 0; o < r.cols(); ++o) ar = checked_add(ar, r.at(i, o));
        if (ar == 0) {
            CellId w = ed.add_cell(Symbol::Weakening, 0);
            ed.connect(in_port[i], ed.cell(w).principal, A);
        } else if (ar == 1) {
            emit[i].push_back(in_port[i]);
        } else {
            auto [root, leaves] = comb(ed, Symbol::Contraction, ar, A);
            ed.connect(in_port[i], root, A);
            emit[i] = std::move(leaves);
        }
    }
    for (std::size_t o = 0; o < r.cols(); ++o) {
        Count ar = 0;
        for (std::size_t i = 0; i < r.rows(); ++i) ar = checked_add(ar, r.at(i, o));
        if (ar == 0) {
            CellId w = ed.add_cell(Symbol::Coweakening, 0);
            ed.connect(ed.cell(w).principal, out_port[o], A);
        } else if (ar == 1) {
            recv[o].push_back(out_port[o]);
        } else {
            auto [root, leaves] = comb(ed, Symbol::Cocontraction, ar, A);
            ed.connect(root, out_port[o], A);
            recv[o] = std::move(leaves);
        }
    }
    std::vector<std::size_t> next_emit(r.rows(), 0), next_recv(r.cols(), 0);
    for (std::size_t i : ins)
        for (std::size_t o : outs)
            for (Count k = 0; k < r.at(i, o); ++k) ed.connect(emit[i][next_emit[i]++], recv[o][next_recv[o]++], A);
    // Receivers fill in input label order because the outer loop runs over inputs.
    return ed.build();
}

bool is_routing_net(const Net& n) {
    if (n.has_boxes()) return false;
    for (const auto& c : n.cells) {
        switch (c.sym) {
        case Symbol::Contraction:
        case Symbol::Cocontraction:
        case Symbol::Weakening:
        case Symbol::Coweakening:
            break;
        default:
            return false;
        }
    }
    std::optional<Formula> bang;
    for (const auto& w : n.wires) {
        Formula f = w.type.is_bang() ? w.type : w.type.dual();
        if (!f.is_bang()) return false;
        if (bang && *bang != f) return false;
        bang = f;
    }
    if (!validate(n).empty()) return false;
    return check_acyclic(n);
}

PortId input_port(const Net& n, const std::string& label) { return find_oriented(n, label, true); }
PortId output_port(const Net& n, const std::string& label) { return find_oriented(n, label, false); }
LabelSet input_labels(const Net& n) { return oriented_labels(n, true); }
LabelSet output_labels(const Net& n) { return oriented_labels(n, false); }

RoutingArea read_area(const Net& n) {
    if (!is_routing_net(n)) not_area("not a routing net");
    if (!find_redexes(n, Policy::All).empty()) throw Error(ErrorKind::NotNormal, "read_area needs a normal net");

    WireIndex w(n);
    PortTable table = index_ports(n);
    LabelSet ins = input_labels(n), outs = output_labels(n);
    for (std::size_t k = 1; k < ins.size(); ++k)
        if (ins[k] == ins[k - 1]) not_area("duplicate input label '" + ins[k] + "'");
    for (std::size_t k = 1; k < outs.size(); ++k)
        if (outs[k] == outs[k - 1]) not_area("duplicate output label '" + outs[k] + "'");

    RoutingArea area{Multirelation(ins, outs)};
    if (!n.wires.empty()) area.payload_type = n.wires.front().type.is_bang() ? n.wires.front().type : n.wires.front().type.dual();
    std::unordered_set<int> seen;

    // Forward from each input: contractions first, then cocontractions, then an output.
    for (const auto& in : ins) {
        PortId start = input_port(n, in);
        std::size_t row = area.rel.input_index(in);
        std::function<void(PortId, bool)> walk = [&](PortId p, bool packing) {
            const PortUse& u = table.at(p);
            if (u.cell < 0) {
                std::size_t col = area.rel.output_index(n.free[static_cast<std::size_t>(u.slot)].label);
                area.rel.set(row, col, checked_add(area.rel.at(row, col), 1));
                return;
            }
            const Cell& c = n.cells[static_cast<std::size_t>(u.cell)];
            seen.insert(u.cell);
            if (c.sym == Symbol::Contraction && u.slot == 0) {
                if (packing) not_area("contraction below a cocontraction");
                for (PortId a : c.aux) walk(w.partner(a), false);
            } else if (c.sym == Symbol::Weakening) {
                if (packing) not_area("weakening below a cocontraction");
            } else if (c.sym == Symbol::Cocontraction && u.slot >= 1) {
                walk(w.partner(c.principal), true);
            } else {
                not_area("flow enters cell " + std::to_string(c.id) + " against its orientation");
            }
        };
        walk(w.partner(start), false);
    }
    // Backward from each output: cocontraction trees may end in coweakenings.
    for (const auto& out : outs) {
        std::function<void(PortId)> back = [&](PortId p) {
            const PortUse& u = table.at(p);
            if (u.cell < 0) return;
            const Cell& c = n.cells[static_cast<std::size_t>(u.cell)];
            if (c.sym == Symbol::Coweakening) seen.insert(u.cell);
            if (c.sym == Symbol::Cocontraction && u.slot == 0) {
                seen.insert(u.cell);
                for (PortId a : c.aux) back(w.partner(a));
            }
        };
        back(w.partner(output_port(n, out)));
    }
    for (std::size_t k = 0; k < n.cells.size(); ++k)
        if (!seen.count(static_cast<int>(k))) not_area("cell " + std::to_string(n.cells[k].id) + " lies off every route");
    return area;
}

Multirelation semantics(const Net& n, std::size_t budget) {
    NormalizeOptions opt;
    opt.budget = budget;
    return read_area(single_summand(normalize(n, opt), "routing net")).rel;
}

Multirelation path_semantics(const Net& n) {
    LabelSet ins = input_labels(n), outs = output_labels(n);
    Multirelation r(ins, outs);
    for (std::size_t i = 0; i < ins.size(); ++i) {
        PortId pi = input_port(n, ins[i]);
        for (std::size_t o = 0; o < outs.size(); ++o) r.set(i, o, count_paths(n, pi, output_port(n, outs[o])));
    }
    return r;
}

Net juxtapose(const Net& a, const Net& b) {
    NetEditor ed;
    auto tagged = [&](const Net& x, const char* tag) {
        std::size_t before = ed.free().size();
        ed.splice(x);
        for (std::size_t k = before; k < ed.free().size(); ++k) ed.free()[k].label = tag + ed.free()[k].label;
    };
    tagged(a, "L.");
    tagged(b, "R.");
    return ed.build();
}

Net trace_net(const Net& a, const std::string& i, const std::string& o, std::size_t budget) {
    PortId pi = input_port(a, i), po = output_port(a, o);
    if (count_paths(a, pi, po) != 0)
        throw Error(ErrorKind::CycleRisk, "a route already leads from '" + i + "' to '" + o + "'");
    NetEditor ed(a);
    ed.fuse(po, pi);
    NormalizeOptions opt;
    opt.budget = budget;
    return single_summand(normalize(ed.build(), opt), "trace");
}

Net compose_areas(const Net& a, const LabelSet& outs, const Net& b, const LabelSet& ins, std::size_t budget) {
    if (outs.size() != ins.size())
        throw Error(ErrorKind::DomainMismatch, "compose_areas needs as many outputs as inputs");
    Net j = juxtapose(a, b);
    for (std::size_t k = 0; k < outs.size(); ++k) j = trace_net(j, "R." + ins[k], "L." + outs[k], budget);
    return j;
}

Net payload_box() {
    NetEditor in;
    PortId f = in.add_free("");
    CellId one = in.add_cell(Symbol::One, 0);
    in.connect(in.cell(one).principal, f, Formula::one());

    NetEditor ed;
    PortId p = ed.add_free("payload");
    CellId box = ed.add_cell(Symbol::Box, 0, std::make_shared<const Net>(in.build()));
    ed.connect(ed.cell(box).principal, p, Formula::bang(Formula::one()));
    return ed.build();
}

TransitResult transit(const Net& a, const std::string& i, std::size_t budget) {
    return transit(a, i, payload_box(), budget);
}

TransitResult transit(const Net& a, const std::string& i, const Net& payload, std::size_t budget) {
    if (payload.free.size() != 1) throw Error(ErrorKind::InterfaceMismatch, "payload needs exactly one free port");
    LabelSet outs = output_labels(a);
    PortId pi = input_port(a, i);

    NetEditor ed(a);
    Formula A = ed.type_from(pi);
    CellId k = ed.add_cell(Symbol::Cocontraction, 2);
    ed.rehome(pi, ed.cell(k).principal);
    ed.connect(pi, ed.cell(k).aux[1], A);
    auto ports = ed.splice(payload);
    PortId q = ports.at(payload.free.front().port);
    ed.plug(q, ed.cell(k).aux[0]);

    NormalizeOptions opt;
    opt.budget = budget;
    Net nf = single_summand(normalize(ed.build(), opt), "transit");

    TransitResult res;
    WireIndex w(nf);
    PortTable table = index_ports(nf);
    std::vector<CellId> copies;
    for (const auto& o : outs) {
        Count found = 0;
        std::function<void(PortId)> back = [&](PortId p) {
            const PortUse& u = table.at(p);
            if (u.cell < 0) return;
            const Cell& c = nf.cells[static_cast<std::size_t>(u.cell)];
            if (c.is_closed_box() && u.slot == 0) {
                ++found;
                copies.push_back(c.id);
            } else if (c.sym == Symbol::Cocontraction && u.slot == 0) {
                for (PortId x : c.aux) back(w.partner(x));
            }
        };
        back(w.partner(output_port(nf, o)));
        res.copies[o] = found;
    }

    NetEditor rest(nf);
    for (CellId c : copies) {
        PortId p = rest.cell(c).principal;
        Formula f = rest.type_from(p);
        PortId far = rest.partner(p);
        rest.remove_cell(c);
        CellId cw = rest.add_cell(Symbol::Coweakening, 0);
        rest.connect(rest.cell(cw).principal, far, f);
    }
    res.residual = rest.build();
    return res;
}

Multirelation delta_relation() {
    Multirelation r = comm(4);
    r.set("3", "1", 0);
    r.set("3", "2", 0);
    return r;
}

Net gamma() { return build_area(comm(3)); }
Net delta() { return build_area(delta_relation()); }

}  // namespace routenet
