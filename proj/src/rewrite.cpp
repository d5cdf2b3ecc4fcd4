// SPDX-License-Identifier: Apache-2.0
#include "routenet/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <sstream>

#include "routenet/canon.hpp"

namespace routenet {

const char* rule_name(Rule r) {
    switch (r) {
    case Rule::m: return "m";
    case Rule::e: return "e";
    case Rule::d: return "d";
    case Rule::er: return "er";
    case Rule::c: return "c";
    case Rule::nd: return "nd";
    case Rule::ba: return "ba";
    case Rule::s1: return "s1";
    case Rule::s2: return "s2";
    case Rule::eps_ww: return "eps_ww";
    case Rule::zero_wd: return "zero_wd";
    }
    return "?";
}

std::string Redex::describe() const {
    std::ostringstream os;
    os << depth() << ' ' << rule_name(rule) << ' ';
    for (CellId b : path) os << b << '.';
    os << first << ',' << second << '/' << wire;
    return os.str();
}

namespace {

struct Match {
    Rule rule;
    const Cell* first;
    const Cell* second;
    std::size_t door = 0;
};

/** Principal-against-principal cuts, keyed by the unordered symbol pair. */
std::optional<Match> principal_pair(const Cell& x, const Cell& y) {
    auto is = [](const Cell& c, Symbol s) { return c.sym == s; };
    auto try_pair = [&](const Cell& a, const Cell& b) -> std::optional<Match> {
        if (is(a, Symbol::Tensor) && is(b, Symbol::Par)) return Match{Rule::m, &a, &b};
        if (b.is_closed_box()) {
            if (is(a, Symbol::Dereliction)) return Match{Rule::e, &a, &b};
            if (is(a, Symbol::Contraction)) return Match{Rule::d, &a, &b};
            if (is(a, Symbol::Weakening)) return Match{Rule::er, &a, &b};
        }
        if (is(a, Symbol::Dereliction) && is(b, Symbol::Cocontraction)) return Match{Rule::nd, &a, &b};
        if (is(a, Symbol::Coweakening) && is(b, Symbol::Dereliction)) return Match{Rule::zero_wd, &a, &b};
        if (is(a, Symbol::Cocontraction) && is(b, Symbol::Contraction)) return Match{Rule::ba, &a, &b};
        if (is(a, Symbol::Coweakening) && is(b, Symbol::Contraction)) return Match{Rule::s1, &a, &b};
        if (is(a, Symbol::Cocontraction) && is(b, Symbol::Weakening)) return Match{Rule::s2, &a, &b};
        if (is(a, Symbol::Coweakening) && is(b, Symbol::Weakening)) return Match{Rule::eps_ww, &a, &b};
        return std::nullopt;
    };
    if (auto m = try_pair(x, y)) return m;
    return try_pair(y, x);
}

std::optional<Match> classify(const Cell& x, int sx, const Cell& y, int sy) {
    if (sx == 0 && sy == 0) return principal_pair(x, y);
    if (sx == 0 && x.is_closed_box() && y.is_box() && sy > 0) {
        return Match{Rule::c, &x, &y, static_cast<std::size_t>(sy - 1)};
    }
    if (sy == 0 && y.is_closed_box() && x.is_box() && sx > 0) {
        return Match{Rule::c, &y, &x, static_cast<std::size_t>(sx - 1)};
    }
    return std::nullopt;
}

void scan(const Net& n, std::vector<CellId>& path, Policy policy, std::vector<Redex>& out) {
    const bool surface = path.empty();
    const bool all_rules = surface && policy != Policy::AnyDepthEEr;
    const bool e_er = !surface && policy != Policy::SurfaceOnly;
    if (all_rules || e_er) {
        PortTable t = index_ports(n);
        for (const auto& w : n.wires) {
            const PortUse& ua = t.at(w.a);
            const PortUse& ub = t.at(w.b);
            if (ua.cell < 0 || ub.cell < 0) continue;
            auto m = classify(n.cells[ua.cell], ua.slot, n.cells[ub.cell], ub.slot);
            if (!m) continue;
            if (!all_rules && m->rule != Rule::e && m->rule != Rule::er) continue;
            out.push_back(Redex{m->rule, path, m->first->id, m->second->id, std::min(w.a, w.b), m->door});
        }
    }
    if (policy == Policy::SurfaceOnly) return;
    for (const auto& c : n.cells) {
        if (!c.inner) continue;
        path.push_back(c.id);
        scan(*c.inner, path, policy, out);
        path.pop_back();
    }
}

bool redex_less(const Redex& a, const Redex& b) {
    if (a.depth() != b.depth()) return a.depth() < b.depth();
    if (a.path != b.path) return a.path < b.path;
    CellId la = std::min(a.first, a.second), lb = std::min(b.first, b.second);
    if (la != lb) return la < lb;
    return a.wire < b.wire;
}

[[noreturn]] void stale(const Redex& r, const std::string& why) {
    throw Error(ErrorKind::StaleRedex, "stale redex " + r.describe() + ": " + why);
}

std::vector<Net> fire(const Net& level, const Redex& r) {
    NetEditor ed(level);
    if (!ed.has_cell(r.first) || !ed.has_cell(r.second)) stale(r, "cell missing");
    const Cell a = ed.cell(r.first);
    const Cell b = ed.cell(r.second);
    PortId cut_b = r.rule == Rule::c ? (r.door < b.aux.size() ? b.aux[r.door] : -1) : b.principal;
    if (cut_b < 0 || !ed.linked(a.principal) || ed.partner(a.principal) != cut_b) stale(r, "cut wire changed");
    auto m = classify(a, 0, b, r.rule == Rule::c ? static_cast<int>(r.door) + 1 : 0);
    if (!m || m->rule != r.rule || m->first->id != a.id) stale(r, "cells no longer form this redex");

    std::vector<Net> out;
    switch (r.rule) {
    case Rule::m:
        ed.disconnect(a.principal);
        ed.bridge(a.aux[0], b.aux[0]);
        ed.bridge(a.aux[1], b.aux[1]);
        ed.remove_cell(a.id);
        ed.remove_cell(b.id);
        out.push_back(ed.build());
        break;
    case Rule::e: {
        ed.disconnect(a.principal);
        auto map = ed.splice(*b.inner);
        PortId f0 = map.at(b.inner->free.at(0).port);
        ed.bridge(a.aux[0], f0);
        ed.remove_free(f0);
        ed.remove_cell(a.id);
        ed.remove_cell(b.id);
        out.push_back(ed.build());
        break;
    }
    case Rule::d: {
        ed.disconnect(a.principal);
        CellId b1 = ed.add_cell(Symbol::Box, 0, b.inner);
        CellId b2 = ed.add_cell(Symbol::Box, 0, b.inner);
        ed.rehome(a.aux[0], ed.cell(b1).principal);
        ed.rehome(a.aux[1], ed.cell(b2).principal);
        ed.remove_cell(a.id);
        ed.remove_cell(b.id);
        out.push_back(ed.build());
        break;
    }
    case Rule::er:
    case Rule::eps_ww:
        ed.remove_cell(a.id);
        ed.remove_cell(b.id);
        out.push_back(ed.build());
        break;
    case Rule::c: {
        NetEditor in(*b.inner);
        PortId door = b.inner->free.at(r.door + 1).port;
        CellId q = in.add_cell(Symbol::Box, 0, a.inner);
        in.plug(door, in.cell(q).principal);
        ed.set_inner(b.id, std::make_shared<const Net>(in.build()));
        ed.remove_aux(b.id, r.door);
        ed.remove_cell(a.id);
        out.push_back(ed.build());
        break;
    }
    case Rule::nd:
        for (int side = 0; side < 2; ++side) {
            NetEditor e2(level);
            e2.disconnect(a.principal);
            CellId der = e2.add_cell(Symbol::Dereliction, 1);
            CellId weak = e2.add_cell(Symbol::Weakening, 0);
            e2.rehome(b.aux[side], e2.cell(der).principal);
            e2.rehome(b.aux[1 - side], e2.cell(weak).principal);
            e2.rehome(a.aux[0], e2.cell(der).aux[0]);
            e2.remove_cell(a.id);
            e2.remove_cell(b.id);
            out.push_back(e2.build());
        }
        break;
    case Rule::zero_wd:
        break;
    case Rule::ba: {
        Formula t = ed.type_from(b.principal);  // contraction principal read outward
        ed.disconnect(a.principal);
        CellId k[2] = {ed.add_cell(Symbol::Cocontraction, 2), ed.add_cell(Symbol::Cocontraction, 2)};
        CellId c[2] = {ed.add_cell(Symbol::Contraction, 2), ed.add_cell(Symbol::Contraction, 2)};
        for (int j = 0; j < 2; ++j) ed.rehome(b.aux[j], ed.cell(k[j]).principal);
        for (int i = 0; i < 2; ++i) ed.rehome(a.aux[i], ed.cell(c[i]).principal);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) ed.connect(ed.cell(c[i]).aux[j], ed.cell(k[j]).aux[i], t.dual());
        ed.remove_cell(a.id);
        ed.remove_cell(b.id);
        out.push_back(ed.build());
        break;
    }
    case Rule::s1:
    case Rule::s2: {
        // s1: coweakening meets a contraction; s2: a cocontraction meets a weakening
        Symbol unit = r.rule == Rule::s1 ? Symbol::Coweakening : Symbol::Weakening;
        const Cell& binary = r.rule == Rule::s1 ? b : a;
        ed.disconnect(a.principal);
        for (int j = 0; j < 2; ++j) {
            CellId u = ed.add_cell(unit, 0);
            ed.rehome(binary.aux[j], ed.cell(u).principal);
        }
        ed.remove_cell(a.id);
        ed.remove_cell(b.id);
        out.push_back(ed.build());
        break;
    }
    }
    return out;
}

std::vector<Net> apply_at(const Net& level, const Redex& r, std::size_t depth) {
    if (depth == r.path.size()) return fire(level, r);
    const Cell* box = level.find_cell(r.path[depth]);
    if (!box || !box->inner) stale(r, "box on the path is missing");
    std::vector<Net> out;
    for (auto& inner : apply_at(*box->inner, r, depth + 1)) {
        Net copy = level;
        for (auto& c : copy.cells)
            if (c.id == box->id) c.inner = std::make_shared<const Net>(std::move(inner));
        out.push_back(std::move(copy));
    }
    return out;
}

}  // namespace

std::vector<Redex> find_redexes(const Net& n, Policy policy) {
    std::vector<Redex> out;
    std::vector<CellId> path;
    scan(n, path, policy, out);
    std::sort(out.begin(), out.end(), redex_less);
    return out;
}

NetSum apply(const Net& n, const Redex& r) {
    NetSum s;
    s.summands = apply_at(n, r, 0);
    return s;
}

std::optional<Redex> next_redex(const Net& n, bool reverse) {
    for (Policy p : {Policy::SurfaceOnly, Policy::AnyDepthEEr}) {
        auto rs = find_redexes(n, p);
        if (!rs.empty()) return reverse ? rs.back() : rs.front();
    }
    return std::nullopt;
}

NetSum normalize(const NetSum& s, const NormalizeOptions& opt, NormalizeStats* stats) {
    struct Item {
        Net net;
        std::size_t steps;
    };
    std::deque<Item> work;
    for (const auto& n : s.summands) work.push_back(Item{n, 0});
    std::map<std::string, Net> done;
    std::size_t total = 0;
    auto partial = [&](const Item* current) {
        NetSum p;
        for (auto& [k, n] : done) p.summands.push_back(n);
        if (current) p.summands.push_back(current->net);
        for (auto& it : work) p.summands.push_back(it.net);
        return p;
    };
    while (!work.empty()) {
        Item it = std::move(work.front());
        work.pop_front();
        auto r = next_redex(it.net, opt.reverse);
        if (!r) {
            // Rebuilding trees can, rarely, line a closed box up with a door; keep going if so.
            CanonicalNet cn = canonical_form(it.net);
            if (next_redex(cn.net)) {
                work.push_back(Item{std::move(cn.net), it.steps});
                continue;
            }
            done.emplace(std::move(cn.key), std::move(cn.net));
            continue;
        }
        if (it.steps >= opt.budget) throw BudgetExhausted(partial(&it), opt.budget);
        NetSum res = apply(it.net, *r);
        ++total;
        if (opt.trace) *opt.trace << r->describe() << " -> " << res.summands.size() << " summands\n";
        for (auto& n : res.summands) work.push_back(Item{std::move(n), it.steps + 1});
    }
    if (stats) stats->steps = total;
    NetSum out;
    for (auto& [k, n] : done) out.summands.push_back(std::move(n));
    return out;
}

NetSum normalize(const Net& n, const NormalizeOptions& opt, NormalizeStats* stats) {
    return normalize(NetSum(n), opt, stats);
}

std::vector<std::size_t> ReductionGraph::sinks() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].empty()) out.push_back(i);
    return out;
}

bool ReductionGraph::has_cycle() const {
    std::vector<int> state(nodes.size(), 0);
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        if (state[s]) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
        state[s] = 1;
        while (!stack.empty()) {
            auto& [v, k] = stack.back();
            if (k < edges[v].size()) {
                std::size_t w = edges[v][k++];
                if (state[w] == 1) return true;
                if (state[w] == 0) {
                    state[w] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                state[v] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

ReductionGraph reduction_graph(const Net& n, std::size_t node_budget) {
    struct Entry {
        std::vector<std::string> keys;
        std::vector<Net> nets;
    };
    auto make = [](std::vector<Net> nets) {
        std::vector<std::pair<std::string, Net>> kv;
        for (auto& x : nets) {
            CanonicalNet c = canonical_form(x);
            kv.emplace_back(std::move(c.key), std::move(c.net));
        }
        std::sort(kv.begin(), kv.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        Entry e;
        for (auto& [k, x] : kv) {
            if (!e.keys.empty() && e.keys.back() == k) continue;
            e.keys.push_back(k);
            e.nets.push_back(std::move(x));
        }
        return e;
    };
    auto sum_key = [](const Entry& e) {
        std::string k;
        for (const auto& s : e.keys) k += std::to_string(s.size()) + ":" + s;
        return k;
    };

    ReductionGraph g;
    std::vector<Entry> entries;
    std::map<std::string, std::size_t> index;
    Entry start = make({n});
    index.emplace(sum_key(start), 0);
    entries.push_back(std::move(start));
    g.edges.emplace_back();
    for (std::size_t v = 0; v < entries.size(); ++v) {
        std::vector<std::size_t> succ;
        for (std::size_t i = 0; i < entries[v].nets.size(); ++i) {
            for (const auto& r : find_redexes(entries[v].nets[i], Policy::All)) {
                std::vector<Net> nets;
                for (std::size_t j = 0; j < entries[v].nets.size(); ++j)
                    if (j != i) nets.push_back(entries[v].nets[j]);
                for (auto& x : apply(entries[v].nets[i], r).summands) nets.push_back(std::move(x));
                Entry e = make(std::move(nets));
                std::string k = sum_key(e);
                auto it = index.find(k);
                std::size_t w;
                if (it != index.end()) {
                    w = it->second;
                } else if (entries.size() >= node_budget) {
                    g.truncated = true;
                    continue;
                } else {
                    w = entries.size();
                    index.emplace(std::move(k), w);
                    entries.push_back(std::move(e));
                    g.edges.emplace_back();
                }
                succ.push_back(w);
            }
        }
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        g.edges[v] = std::move(succ);
    }
    for (auto& e : entries) {
        NetSum s;
        s.summands = std::move(e.nets);
        g.nodes.push_back(std::move(s));
    }
    return g;
}

}  // namespace routenet
