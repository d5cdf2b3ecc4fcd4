// SPDX-License-Identifier: Apache-2.0
#include "routenet/net.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "routenet/errors.hpp"

namespace routenet {

const char* symbol_name(Symbol s) {
    switch (s) {
    case Symbol::One: return "one";
    case Symbol::Tensor: return "tensor";
    case Symbol::Par: return "par";
    case Symbol::Dereliction: return "der";
    case Symbol::Contraction: return "con";
    case Symbol::Weakening: return "weak";
    case Symbol::Cocontraction: return "cocon";
    case Symbol::Coweakening: return "coweak";
    case Symbol::Box: return "box";
    }
    return "?";
}

std::optional<Symbol> symbol_from_name(std::string_view name) {
    static const std::pair<const char*, Symbol> table[] = {
        {"one", Symbol::One},           {"tensor", Symbol::Tensor},       {"par", Symbol::Par},
        {"der", Symbol::Dereliction},   {"con", Symbol::Contraction},     {"weak", Symbol::Weakening},
        {"cocon", Symbol::Cocontraction}, {"coweak", Symbol::Coweakening}, {"box", Symbol::Box},
    };
    for (const auto& [n, s] : table)
        if (name == n) return s;
    return std::nullopt;
}

int symbol_arity(Symbol s) {
    switch (s) {
    case Symbol::One:
    case Symbol::Weakening:
    case Symbol::Coweakening: return 0;
    case Symbol::Dereliction: return 1;
    case Symbol::Tensor:
    case Symbol::Par:
    case Symbol::Contraction:
    case Symbol::Cocontraction: return 2;
    case Symbol::Box: return -1;
    }
    return 0;
}

const Cell* Net::find_cell(CellId id) const {
    for (const auto& c : cells)
        if (c.id == id) return &c;
    return nullptr;
}

const FreePort* Net::find_free(std::string_view label) const {
    for (const auto& f : free)
        if (f.label == label) return &f;
    return nullptr;
}

bool Net::has_boxes() const {
    return std::any_of(cells.begin(), cells.end(), [](const Cell& c) { return c.is_box(); });
}

std::size_t Net::total_cells() const {
    std::size_t n = cells.size();
    for (const auto& c : cells)
        if (c.inner) n += c.inner->total_cells();
    return n;
}

void Net::reset_next_id() {
    std::int64_t m = -1;
    for (const auto& f : free) m = std::max(m, f.port);
    for (const auto& c : cells) {
        m = std::max({m, c.id, c.principal});
        for (PortId p : c.aux) m = std::max(m, p);
    }
    for (const auto& w : wires) m = std::max({m, w.a, w.b});
    next_id = m + 1;
}

PortTable index_ports(const Net& n) {
    PortTable t;
    for (std::size_t i = 0; i < n.free.size(); ++i) t[n.free[i].port] = PortUse{-1, static_cast<int>(i), -1};
    for (std::size_t ci = 0; ci < n.cells.size(); ++ci) {
        const Cell& c = n.cells[ci];
        t[c.principal] = PortUse{static_cast<int>(ci), 0, -1};
        for (std::size_t k = 0; k < c.aux.size(); ++k) t[c.aux[k]] = PortUse{static_cast<int>(ci), static_cast<int>(k + 1), -1};
    }
    for (std::size_t wi = 0; wi < n.wires.size(); ++wi) {
        t[n.wires[wi].a].wire = static_cast<int>(wi);
        t[n.wires[wi].b].wire = static_cast<int>(wi);
    }
    return t;
}

Formula outward_type(const Net& n, const PortTable& t, PortId p) {
    auto it = t.find(p);
    if (it == t.end() || it->second.wire < 0) return {};
    const Wire& w = n.wires[it->second.wire];
    return w.a == p ? w.type : w.type.dual();
}

Formula inward_type(const Net& n, const PortTable& t, PortId p) {
    Formula f = outward_type(n, t, p);
    return f ? f.dual() : f;
}

namespace {

struct Validator {
    std::vector<Violation> out;
    std::string where;

    void add(std::string rule, std::vector<std::int64_t> ids, std::string detail) {
        out.push_back(Violation{std::move(rule), std::move(ids), where + detail});
    }

    void run(const Net& n, bool inner) {
        std::map<PortId, int> uses;  // cell-slot and free-list occurrences
        std::set<CellId> cell_ids;
        std::set<PortId> free_ports;
        for (const auto& f : n.free) {
            if (!free_ports.insert(f.port).second) add("PortReuse", {f.port}, "free port listed twice");
            ++uses[f.port];
        }
        for (const auto& c : n.cells) {
            if (!cell_ids.insert(c.id).second) add("DuplicateCellId", {c.id}, "cell id used twice");
            int ar = symbol_arity(c.sym);
            if (ar >= 0 && static_cast<int>(c.aux.size()) != ar) {
                add("ArityMismatch", {c.id}, std::string(symbol_name(c.sym)) + " needs " + std::to_string(ar) + " auxiliary ports");
            }
            std::set<PortId> own;
            own.insert(c.principal);
            for (PortId p : c.aux)
                if (!own.insert(p).second) add("PortReuse", {c.id, p}, "port repeated within a cell");
            for (PortId p : own) {
                if (free_ports.count(p)) add("PortReuse", {c.id, p}, "free port used by a cell");
                ++uses[p];
            }
            if (c.is_box() && !c.inner) add("BoxMissingInner", {c.id}, "box without inner net");
            if (!c.is_box() && c.inner) add("UnexpectedInner", {c.id}, "only boxes carry inner nets");
        }
        for (const auto& [p, k] : uses)
            if (k > 1) add("PortReuse", {p}, "port occurs in more than one slot");

        std::map<PortId, int> wired;
        for (const auto& w : n.wires) {
            if (w.a == w.b) add("SelfWire", {w.a}, "wire with equal endpoints");
            if (!w.type) add("UntypedWire", {w.a, w.b}, "wire without formula");
            for (PortId p : {w.a, w.b}) {
                if (!uses.count(p)) add("UnknownPort", {p}, "wire endpoint is neither a cell port nor free");
                ++wired[p];
            }
            if (inner && free_ports.count(w.a) && free_ports.count(w.b)) {
                add("BoxFloatingWire", {w.a, w.b}, "floating wire inside a box");
            }
        }
        for (const auto& [p, k] : uses) {
            auto it = wired.find(p);
            if (it == wired.end()) add("PortUnwired", {p}, "port in no wire");
            else if (it->second > 1) add("PortMultiWired", {p}, "port in more than one wire");
        }
        if (!out.empty()) return;  // typing needs a sound wiring
        PortTable t = index_ports(n);
        for (const auto& c : n.cells) check_cell(n, t, c);
    }

    void mismatch(const Cell& c, PortId p, const std::string& expect, Formula got) {
        add("TypeMismatch", {c.id, p}, std::string(symbol_name(c.sym)) + " port expects " + expect + ", wire carries " + got.str());
    }

    void check_cell(const Net& n, const PortTable& t, const Cell& c) {
        Formula P = outward_type(n, t, c.principal);
        std::vector<Formula> X;
        for (PortId p : c.aux) X.push_back(outward_type(n, t, p));
        auto expect_aux = [&](std::size_t k, Formula f) {
            if (X[k] != f) mismatch(c, c.aux[k], "outward " + f.str(), X[k]);
        };
        using K = Formula::Kind;
        switch (c.sym) {
        case Symbol::One:
            if (P != Formula::one()) mismatch(c, c.principal, "1", P);
            break;
        case Symbol::Tensor:
        case Symbol::Par: {
            K want = c.sym == Symbol::Tensor ? K::Tensor : K::Par;
            if (P.kind() != want) { mismatch(c, c.principal, c.sym == Symbol::Tensor ? "A*B" : "A%B", P); break; }
            expect_aux(0, P.left().dual());
            expect_aux(1, P.right().dual());
            break;
        }
        case Symbol::Dereliction:
            if (!P.is_whynot()) { mismatch(c, c.principal, "?A", P); break; }
            expect_aux(0, P.left().dual());
            break;
        case Symbol::Contraction:
        case Symbol::Weakening:
            if (!P.is_whynot()) { mismatch(c, c.principal, "?A", P); break; }
            for (std::size_t k = 0; k < X.size(); ++k) expect_aux(k, P.dual());
            break;
        case Symbol::Cocontraction:
        case Symbol::Coweakening:
            if (!P.is_bang()) { mismatch(c, c.principal, "!A", P); break; }
            for (std::size_t k = 0; k < X.size(); ++k) expect_aux(k, P.dual());
            break;
        case Symbol::Box:
            check_box(n, t, c, P, X);
            break;
        }
    }

    void check_box(const Net&, const PortTable&, const Cell& c, Formula P, const std::vector<Formula>& X) {
        if (!c.inner) return;
        const Net& in = *c.inner;
        if (in.free.size() != c.aux.size() + 1) {
            add("BoxDoorMismatch", {c.id}, "inner net has " + std::to_string(in.free.size()) + " free ports for " +
                                               std::to_string(c.aux.size() + 1) + " box ports");
        }
        Validator sub;
        sub.where = where + "box " + std::to_string(c.id) + ": ";
        sub.run(in, true);
        for (auto& v : sub.out) {
            v.ids.insert(v.ids.begin(), c.id);
            out.push_back(std::move(v));
        }
        if (!sub.out.empty() || in.free.size() != c.aux.size() + 1) return;
        PortTable it = index_ports(in);
        Formula a = inward_type(in, it, in.free[0].port);
        if (!P.is_bang() || P.left() != a) mismatch(c, c.principal, "!" + a.str(), P);
        for (std::size_t k = 0; k < c.aux.size(); ++k) {
            Formula door = inward_type(in, it, in.free[k + 1].port);
            if (!door.is_whynot()) {
                add("BoxDoorType", {c.id, c.aux[k]}, "door " + std::to_string(k) + " must carry a !-formula inward, got " + door.dual().str());
            } else if (X[k] != door) {
                mismatch(c, c.aux[k], "outward " + door.str(), X[k]);
            }
        }
    }
};

}  // namespace

std::vector<Violation> validate(const Net& n) {
    Validator v;
    v.run(n, false);
    return v.out;
}

std::string format_violations(const std::vector<Violation>& v) {
    std::ostringstream os;
    for (const auto& x : v) {
        os << x.rule << " [";
        for (std::size_t i = 0; i < x.ids.size(); ++i) os << (i ? "," : "") << x.ids[i];
        os << "] " << x.detail << '\n';
    }
    return os.str();
}

NetEditor::NetEditor(const Net& n) : free_(n.free), next_id_(n.next_id) {
    for (const auto& c : n.cells) cells_.emplace(c.id, c);
    for (const auto& w : n.wires) {
        link_[w.a] = {w.b, w.type};
        link_[w.b] = {w.a, w.type.dual()};
    }
    Net probe = n;
    probe.reset_next_id();
    next_id_ = std::max(next_id_, probe.next_id);
}

CellId NetEditor::add_cell(Symbol s, std::size_t n_aux, std::shared_ptr<const Net> inner) {
    Cell c;
    c.id = fresh();
    c.sym = s;
    c.principal = fresh();
    for (std::size_t k = 0; k < n_aux; ++k) c.aux.push_back(fresh());
    c.inner = std::move(inner);
    CellId id = c.id;
    cells_.emplace(id, std::move(c));
    return id;
}

const Cell& NetEditor::cell(CellId id) const {
    auto it = cells_.find(id);
    if (it == cells_.end()) throw Error(ErrorKind::StaleRedex, "no cell " + std::to_string(id));
    return it->second;
}

void NetEditor::remove_cell(CellId id) {
    const Cell& c = cell(id);
    disconnect(c.principal);
    for (PortId p : c.aux) disconnect(p);
    cells_.erase(id);
}

void NetEditor::set_inner(CellId id, std::shared_ptr<const Net> inner) {
    auto it = cells_.find(id);
    if (it == cells_.end()) throw Error(ErrorKind::StaleRedex, "no cell " + std::to_string(id));
    it->second.inner = std::move(inner);
}

void NetEditor::remove_aux(CellId id, std::size_t k) {
    auto it = cells_.find(id);
    if (it == cells_.end()) throw Error(ErrorKind::StaleRedex, "no cell " + std::to_string(id));
    disconnect(it->second.aux.at(k));
    it->second.aux.erase(it->second.aux.begin() + static_cast<std::ptrdiff_t>(k));
}

PortId NetEditor::add_free(std::string label) {
    PortId p = fresh();
    free_.push_back(FreePort{p, std::move(label)});
    return p;
}

void NetEditor::add_free_port(PortId p, std::string label) {
    free_.push_back(FreePort{p, std::move(label)});
    next_id_ = std::max(next_id_, p + 1);
}

void NetEditor::remove_free(PortId p) {
    auto it = std::find_if(free_.begin(), free_.end(), [p](const FreePort& f) { return f.port == p; });
    if (it != free_.end()) free_.erase(it);
}

bool NetEditor::is_free(PortId p) const {
    return std::any_of(free_.begin(), free_.end(), [p](const FreePort& f) { return f.port == p; });
}

std::vector<PortId> NetEditor::free_ports(std::string_view label) const {
    std::vector<PortId> out;
    for (const auto& f : free_)
        if (f.label == label) out.push_back(f.port);
    return out;
}

PortId NetEditor::free_port(std::string_view label) const {
    auto v = free_ports(label);
    if (v.size() != 1) {
        throw Error(ErrorKind::InterfaceMismatch, "expected exactly one free port labelled '" + std::string(label) + "'");
    }
    return v[0];
}

void NetEditor::connect(PortId a, PortId b, Formula f) {
    if (linked(a) || linked(b)) throw Error(ErrorKind::StaleRedex, "connect: port already wired");
    link_[a] = {b, f};
    link_[b] = {a, f.dual()};
}

void NetEditor::disconnect(PortId p) {
    auto it = link_.find(p);
    if (it == link_.end()) return;
    PortId q = it->second.first;
    link_.erase(it);
    link_.erase(q);
}

PortId NetEditor::partner(PortId p) const {
    auto it = link_.find(p);
    if (it == link_.end()) throw Error(ErrorKind::StaleRedex, "port " + std::to_string(p) + " is not wired");
    return it->second.first;
}

Formula NetEditor::type_from(PortId p) const {
    auto it = link_.find(p);
    if (it == link_.end()) throw Error(ErrorKind::StaleRedex, "port " + std::to_string(p) + " is not wired");
    return it->second.second;
}

void NetEditor::bridge(PortId u, PortId v) {
    PortId pu = partner(u);
    PortId pv = partner(v);
    if (pu == v) {
        disconnect(u);
        return;
    }
    Formula f = type_from(pu);
    disconnect(u);
    disconnect(v);
    connect(pu, pv, f);
}

void NetEditor::rehome(PortId from, PortId to) {
    PortId p = partner(from);
    Formula f = type_from(from);
    disconnect(from);
    if (p == from) return;
    connect(to, p, f);
}

void NetEditor::fuse(PortId p, PortId q) {
    bridge(p, q);
    remove_free(p);
    remove_free(q);
}

void NetEditor::plug(PortId free_port, PortId cell_port) {
    rehome(free_port, cell_port);
    remove_free(free_port);
}

std::unordered_map<PortId, PortId> NetEditor::splice(const Net& sub) {
    std::unordered_map<PortId, PortId> m;
    auto map_port = [&](PortId p) {
        auto it = m.find(p);
        if (it != m.end()) return it->second;
        PortId q = fresh();
        m.emplace(p, q);
        return q;
    };
    for (const auto& f : sub.free) free_.push_back(FreePort{map_port(f.port), f.label});
    for (const auto& c : sub.cells) {
        Cell d;
        d.id = fresh();
        d.sym = c.sym;
        d.principal = map_port(c.principal);
        for (PortId p : c.aux) d.aux.push_back(map_port(p));
        d.inner = c.inner;
        cells_.emplace(d.id, std::move(d));
    }
    for (const auto& w : sub.wires) connect(map_port(w.a), map_port(w.b), w.type);
    return m;
}

Net NetEditor::build() const {
    Net n;
    n.free = free_;
    n.cells.reserve(cells_.size());
    for (const auto& [id, c] : cells_) n.cells.push_back(c);
    for (const auto& [p, lf] : link_) {
        if (p < lf.first) n.wires.push_back(Wire{p, lf.first, lf.second});
    }
    std::sort(n.wires.begin(), n.wires.end(), [](const Wire& x, const Wire& y) { return x.a < y.a; });
    n.next_id = next_id_;
    return n;
}

}  // namespace routenet
