// SPDX-License-Identifier: Apache-2.0
#include "routenet/canon.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

#include "routenet/errors.hpp"

namespace routenet {

namespace {

bool is_tree(Symbol s) { return s == Symbol::Contraction || s == Symbol::Cocontraction; }

Symbol unit_of(Symbol s) { return s == Symbol::Contraction ? Symbol::Weakening : Symbol::Coweakening; }

using Owner = std::unordered_map<PortId, std::pair<CellId, int>>;

Owner owners(const NetEditor& ed) {
    Owner o;
    for (const auto& [id, c] : ed.cells()) {
        o[c.principal] = {id, 0};
        for (std::size_t k = 0; k < c.aux.size(); ++k) o[c.aux[k]] = {id, static_cast<int>(k + 1)};
    }
    return o;
}

void absorb(NetEditor& ed, bool inner) {
    bool changed = true;
    while (changed) {
        changed = false;
        Owner own = owners(ed);
        std::vector<CellId> ids;
        for (const auto& [id, c] : ed.cells())
            if (is_tree(c.sym)) ids.push_back(id);
        for (CellId id : ids) {
            if (!ed.has_cell(id)) continue;
            const Cell c = ed.cell(id);
            for (int k = 0; k < 2; ++k) {
                PortId q = ed.partner(c.aux[k]);
                auto it = own.find(q);
                if (it == own.end() || !ed.has_cell(it->second.first) || it->second.second != 0) continue;
                const Cell& w = ed.cell(it->second.first);
                if (w.sym != unit_of(c.sym)) continue;
                // Inside a box the rejoined wire may not run free port to free port.
                if (inner && ed.is_free(ed.partner(c.principal)) && ed.is_free(ed.partner(c.aux[1 - k]))) continue;
                ed.remove_cell(w.id);
                ed.bridge(c.principal, c.aux[1 - k]);
                ed.remove_cell(c.id);
                changed = true;
                break;
            }
        }
    }
}

struct Node {
    enum Kind { Free, Plain, Tree } kind = Plain;
    Symbol sym = Symbol::One;
    std::vector<PortId> ports;  // Tree: root principal, then leaves
    std::vector<Formula> out;   // outward formula per slot
    std::shared_ptr<const Net> inner;
    std::string label;  // free ports
    int free_index = -1;
    std::string sig;
};

struct Edge {
    int nbr;
    int slot;  // exact slot on the neighbour
    int cls;   // slot class seen from here: the slot, or 0/1 for tree principal/leaf
};

using Cache = std::unordered_map<const Net*, CanonicalNet>;

CanonicalNet canon_impl(const Net& n, bool inner, Cache& cache);

std::string lp(const std::string& s) { return std::to_string(s.size()) + ":" + s; }

class Labeller {
public:
    Labeller(const std::vector<Node>& nodes, const std::vector<std::vector<Edge>>& adj)
        : nodes_(nodes), adj_(adj), n_(static_cast<int>(nodes.size())) {
        for (const auto& a : adj) width_ = std::max<std::int64_t>(width_, static_cast<std::int64_t>(a.size()) + 2);
    }

    std::vector<int> run(std::string& cert) {
        std::vector<std::string> sigs;
        for (const auto& nd : nodes_) sigs.push_back(nd.sig);
        std::vector<std::string> uniq(sigs);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<int> col(n_);
        for (int v = 0; v < n_; ++v) {
            col[v] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sigs[v]) - uniq.begin());
        }
        std::vector<int> path;
        search(col, path);
        cert = best_cert_;
        return best_order_;
    }

private:
    static constexpr int kNone = INT_MAX;

    void rank(std::vector<std::vector<std::int64_t>>& sig, std::vector<int>& col) {
        std::vector<int> idx(n_);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sig[a] < sig[b]; });
        int c = -1;
        for (int k = 0; k < n_; ++k) {
            if (k == 0 || sig[idx[k]] != sig[idx[k - 1]]) ++c;
            col[idx[k]] = c;
        }
    }

    static int count_colors(const std::vector<int>& col) {
        return col.empty() ? 0 : *std::max_element(col.begin(), col.end()) + 1;
    }

    void refine(std::vector<int>& col) {
        int before = count_colors(col);
        std::vector<std::vector<std::int64_t>> sig(n_);
        while (true) {
            for (int v = 0; v < n_; ++v) {
                auto& s = sig[v];
                s.clear();
                s.push_back(col[v]);
                const auto& a = adj_[v];
                if (nodes_[v].kind == Node::Tree) {
                    s.push_back(col[a[0].nbr] * width_ + a[0].cls);
                    std::size_t mark = s.size();
                    for (std::size_t k = 1; k < a.size(); ++k) s.push_back(col[a[k].nbr] * width_ + a[k].cls);
                    std::sort(s.begin() + static_cast<std::ptrdiff_t>(mark), s.end());
                } else {
                    for (const auto& e : a) s.push_back(col[e.nbr] * width_ + e.cls);
                }
            }
            rank(sig, col);
            int after = count_colors(col);
            if (after == before) return;
            before = after;
        }
    }

    std::vector<int> individualize(const std::vector<int>& col, int v) {
        std::vector<std::vector<std::int64_t>> sig(n_);
        for (int u = 0; u < n_; ++u) sig[u] = {col[u], u == v ? 0 : 1};
        std::vector<int> out(n_);
        rank(sig, out);
        return out;
    }

    std::string certificate(const std::vector<int>& col, std::vector<int>& order) {
        order.assign(n_, 0);
        for (int v = 0; v < n_; ++v) order[col[v]] = v;
        std::string c;
        std::vector<std::pair<int, int>> ent;
        for (int p = 0; p < n_; ++p) {
            int v = order[p];
            c += '{';
            c += nodes_[v].sig;
            c += '|';
            ent.clear();
            for (const auto& e : adj_[v]) ent.emplace_back(col[e.nbr], e.cls);
            if (nodes_[v].kind == Node::Tree) std::sort(ent.begin() + 1, ent.end());
            for (const auto& [q, k] : ent) {
                c += std::to_string(q);
                c += '.';
                c += std::to_string(k);
                c += ',';
            }
            c += '}';
        }
        return c;
    }

    static int common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
        std::size_t k = 0;
        while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
        return static_cast<int>(k);
    }

    int leaf(const std::vector<int>& col, const std::vector<int>& path) {
        std::vector<int> order;
        std::string c = certificate(col, order);
        if (!have_first_) {
            have_first_ = true;
            first_cert_ = best_cert_ = c;
            first_order_ = best_order_ = order;
            first_path_ = best_path_ = path;
            return kNone;
        }
        const std::vector<int>* twin_order = nullptr;
        const std::vector<int>* twin_path = nullptr;
        if (c == first_cert_) {
            twin_order = &first_order_;
            twin_path = &first_path_;
        } else if (c == best_cert_) {
            twin_order = &best_order_;
            twin_path = &best_path_;
        } else if (c < best_cert_) {
            best_cert_ = c;
            best_order_ = order;
            best_path_ = path;
            return kNone;
        } else {
            return kNone;
        }
        std::vector<int> gamma(n_);
        for (int p = 0; p < n_; ++p) gamma[(*twin_order)[p]] = order[p];
        autos_.push_back(std::move(gamma));
        return common_prefix(*twin_path, path);
    }

    int find(std::vector<int>& uf, int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    }

    int search(std::vector<int> col, std::vector<int>& path) {
        if (++visited_ > kCanonSearchBudget) {
            throw Error(ErrorKind::CanonBudget, "canonical labelling exceeded its search budget");
        }
        refine(col);
        int ncol = count_colors(col);
        if (ncol == n_) return leaf(col, path);

        std::vector<int> size(ncol, 0);
        for (int c : col) ++size[c];
        int target = 0;
        while (size[target] < 2) ++target;
        std::vector<int> cell;
        for (int v = 0; v < n_; ++v)
            if (col[v] == target) cell.push_back(v);

        const int depth = static_cast<int>(path.size());
        std::vector<int> explored;
        std::vector<int> uf;
        std::size_t seen_autos = 0;
        for (int v : cell) {
            if (!explored.empty()) {
                if (uf.empty() || seen_autos != autos_.size()) {
                    uf.resize(n_);
                    std::iota(uf.begin(), uf.end(), 0);
                    for (const auto& g : autos_) {
                        bool fixes = std::all_of(path.begin(), path.end(), [&](int s) { return g[s] == s; });
                        if (!fixes) continue;
                        for (int u = 0; u < n_; ++u) {
                            int a = find(uf, u), b = find(uf, g[u]);
                            if (a != b) uf[a] = b;
                        }
                    }
                    seen_autos = autos_.size();
                }
                int rv = find(uf, v);
                bool pruned = std::any_of(explored.begin(), explored.end(), [&](int x) { return find(uf, x) == rv; });
                if (pruned) continue;
            }
            path.push_back(v);
            int r = search(individualize(col, v), path);
            path.pop_back();
            explored.push_back(v);
            if (r != kNone && r < depth) return r;
        }
        return kNone;
    }

    const std::vector<Node>& nodes_;
    const std::vector<std::vector<Edge>>& adj_;
    int n_;
    std::int64_t width_ = 2;
    std::size_t visited_ = 0;
    bool have_first_ = false;
    std::string first_cert_, best_cert_;
    std::vector<int> first_order_, best_order_, first_path_, best_path_;
    std::vector<std::vector<int>> autos_;
};

CanonicalNet canon_impl(const Net& src, bool inner, Cache& cache) {
    NetEditor ed(src);
    absorb(ed, inner);
    Owner own = owners(ed);

    std::vector<Node> nodes;
    std::unordered_map<PortId, std::pair<int, int>> slot_of;  // port -> (node, slot)
    auto add_slot = [&](int node, PortId p, Formula f) {
        slot_of[p] = {node, static_cast<int>(nodes[node].ports.size())};
        nodes[node].ports.push_back(p);
        nodes[node].out.push_back(f);
    };

    for (std::size_t i = 0; i < ed.free().size(); ++i) {
        const FreePort& f = ed.free()[i];
        Node nd;
        nd.kind = Node::Free;
        nd.free_index = static_cast<int>(i);
        nd.label = inner ? "#" + std::to_string(i) : f.label;
        nodes.push_back(nd);
        add_slot(static_cast<int>(nodes.size() - 1), f.port, ed.type_from(f.port));
    }

    // Parent of a tree cell: the same-symbol cell whose auxiliary port faces its principal.
    auto tree_parent = [&](const Cell& c) -> bool {
        auto it = own.find(ed.partner(c.principal));
        if (it == own.end() || it->second.second == 0) return false;
        return ed.cell(it->second.first).sym == c.sym;
    };
    std::set<CellId> in_tree;
    auto grow = [&](const Cell& root) {
        int idx = static_cast<int>(nodes.size());
        Node nd;
        nd.kind = Node::Tree;
        nd.sym = root.sym;
        nodes.push_back(nd);
        Formula p = ed.type_from(root.principal);
        add_slot(idx, root.principal, p);
        in_tree.insert(root.id);
        // Depth-first, left to right, so leaves come out in a stable order.
        std::vector<PortId> leaves;
        std::function<void(const Cell&)> walk = [&](const Cell& c) {
            for (PortId a : c.aux) {
                auto it = own.find(ed.partner(a));
                if (it != own.end() && it->second.second == 0) {
                    const Cell& d = ed.cell(it->second.first);
                    if (d.sym == c.sym && !in_tree.count(d.id)) {
                        in_tree.insert(d.id);
                        walk(d);
                        continue;
                    }
                }
                leaves.push_back(a);
            }
        };
        walk(root);
        for (PortId a : leaves) add_slot(idx, a, p.dual());
    };
    for (const auto& [id, c] : ed.cells())
        if (is_tree(c.sym) && !tree_parent(c)) grow(c);
    for (const auto& [id, c] : ed.cells())
        if (is_tree(c.sym) && !in_tree.count(id)) grow(c);

    for (const auto& [id, c] : ed.cells()) {
        if (is_tree(c.sym)) continue;
        int idx = static_cast<int>(nodes.size());
        Node nd;
        nd.kind = Node::Plain;
        nd.sym = c.sym;
        if (c.inner) {
            auto hit = cache.find(c.inner.get());
            if (hit == cache.end()) hit = cache.emplace(c.inner.get(), canon_impl(*c.inner, true, cache)).first;
            nd.inner = std::make_shared<const Net>(hit->second.net);
            nd.label = hit->second.key;
        }
        nodes.push_back(nd);
        add_slot(idx, c.principal, ed.type_from(c.principal));
        for (PortId a : c.aux) add_slot(idx, a, ed.type_from(a));
    }

    for (auto& nd : nodes) {
        switch (nd.kind) {
        case Node::Free: nd.sig = "F" + lp(nd.label) + nd.out[0].str(); break;
        case Node::Tree:
            nd.sig = std::string("T") + symbol_name(nd.sym) + nd.out[0].str() + "/" + std::to_string(nd.ports.size());
            break;
        case Node::Plain:
            nd.sig = std::string("P") + symbol_name(nd.sym);
            for (Formula f : nd.out) nd.sig += "," + f.str();
            if (nd.inner) nd.sig += "[" + nd.label + "]";
            break;
        }
    }

    std::vector<std::vector<Edge>> adj(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        for (PortId p : nodes[v].ports) {
            auto [u, s] = slot_of.at(ed.partner(p));
            int cls = nodes[u].kind == Node::Tree ? (s == 0 ? 0 : 1) : s;
            adj[v].push_back(Edge{u, s, cls});
        }
    }

    std::string cert;
    Labeller lab(nodes, adj);
    std::vector<int> order = lab.run(cert);
    const int n = static_cast<int>(nodes.size());
    std::vector<int> pos(n);
    for (int p = 0; p < n; ++p) pos[order[p]] = p;

    // Rebuild with ids allocated in canonical order.
    Net out;
    std::int64_t counter = 0;
    std::vector<std::vector<PortId>> slot_port(n);   // new port per slot, sorted-slot order
    std::vector<std::vector<int>> sorted_slots(n);   // sorted position -> original slot
    std::vector<std::pair<int, PortId>> free_new;    // (sort key index, port)
    std::vector<Cell> cells;
    for (int p = 0; p < n; ++p) {
        int v = order[p];
        const Node& nd = nodes[v];
        auto& ss = sorted_slots[v];
        ss.resize(nd.ports.size());
        std::iota(ss.begin(), ss.end(), 0);
        if (nd.kind == Node::Tree) {
            std::stable_sort(ss.begin() + 1, ss.end(), [&](int a, int b) {
                return std::make_pair(pos[adj[v][a].nbr], adj[v][a].cls) < std::make_pair(pos[adj[v][b].nbr], adj[v][b].cls);
            });
        }
        auto& sp = slot_port[v];
        if (nd.kind == Node::Free) {
            sp.push_back(counter++);
            free_new.emplace_back(v, sp[0]);
        } else if (nd.kind == Node::Plain) {
            Cell c;
            c.id = counter++;
            c.sym = nd.sym;
            c.principal = counter++;
            sp.push_back(c.principal);
            for (std::size_t k = 1; k < nd.ports.size(); ++k) {
                c.aux.push_back(counter++);
                sp.push_back(c.aux.back());
            }
            c.inner = nd.inner;
            cells.push_back(std::move(c));
        } else {
            std::size_t leaves = nd.ports.size() - 1;
            std::vector<Cell> comb(leaves - 1);
            for (auto& c : comb) {
                c.id = counter++;
                c.sym = nd.sym;
                c.principal = counter++;
                c.aux = {counter++, counter++};
            }
            sp.push_back(comb.back().principal);
            sp.push_back(comb[0].aux[0]);
            for (std::size_t k = 1; k < leaves; ++k) sp.push_back(comb[k - 1].aux[1]);
            for (std::size_t j = 1; j < comb.size(); ++j) {
                out.wires.push_back(Wire{comb[j - 1].principal, comb[j].aux[0], nd.out[0]});
            }
            for (auto& c : comb) cells.push_back(std::move(c));
        }
    }

    std::vector<std::vector<char>> used(n);
    for (int v = 0; v < n; ++v) used[v].assign(nodes[v].ports.size(), 0);
    auto out_type = [&](int v, int slot) { return nodes[v].out[slot]; };
    for (int p = 0; p < n; ++p) {
        int x = order[p];
        for (std::size_t j = 0; j < sorted_slots[x].size(); ++j) {
            int sx = sorted_slots[x][j];
            if (used[x][sx]) continue;
            used[x][sx] = 1;
            const Edge& e = adj[x][sx];
            int y = e.nbr;
            int my_cls = nodes[x].kind == Node::Tree ? (sx == 0 ? 0 : 1) : sx;
            std::size_t jy = 0;
            if (nodes[y].kind == Node::Tree && e.slot != 0) {
                bool found = false;
                for (std::size_t k = 1; k < sorted_slots[y].size(); ++k) {
                    int sy = sorted_slots[y][k];
                    if (used[y][sy] || adj[y][sy].nbr != x || adj[y][sy].cls != my_cls) continue;
                    jy = k;
                    found = true;
                    break;
                }
                if (!found) throw Error(ErrorKind::CanonBudget, "canonical rebuild lost a wire");
            } else {
                jy = static_cast<std::size_t>(std::find(sorted_slots[y].begin(), sorted_slots[y].end(), e.slot) - sorted_slots[y].begin());
            }
            int sy = sorted_slots[y][jy];
            used[y][sy] = 1;
            PortId a = slot_port[x][j];
            PortId b = slot_port[y][jy];
            Formula f = out_type(x, sx);
            if (a < b) out.wires.push_back(Wire{a, b, f});
            else out.wires.push_back(Wire{b, a, f.dual()});
        }
    }

    std::sort(free_new.begin(), free_new.end(), [&](const auto& l, const auto& r) {
        const Node& a = nodes[l.first];
        const Node& b = nodes[r.first];
        if (inner) return a.free_index < b.free_index;
        if (a.label != b.label) return a.label < b.label;
        return pos[l.first] < pos[r.first];
    });
    for (const auto& [v, port] : free_new) out.free.push_back(FreePort{port, inner ? std::string() : nodes[v].label});
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
    out.cells = std::move(cells);
    std::sort(out.wires.begin(), out.wires.end(), [](const Wire& a, const Wire& b) { return a.a < b.a; });
    out.next_id = counter;
    return CanonicalNet{std::move(out), std::move(cert)};
}

}  // namespace

CanonicalNet canonical_form(const Net& n) {
    Cache cache;
    return canon_impl(n, false, cache);
}

Net canonicalize(const Net& n) { return canonical_form(n).net; }

std::string canonical_key(const Net& n) { return canonical_form(n).key; }

Net absorb_neutral(const Net& n) {
    NetEditor ed(n);
    absorb(ed, false);
    return ed.build();
}

bool canonical_equal(const Net& a, const Net& b) { return canonical_key(a) == canonical_key(b); }

std::vector<std::string> canonical_keys(const NetSum& s) {
    std::vector<std::string> keys;
    for (const auto& n : s.summands) keys.push_back(canonical_key(n));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

bool canonical_equal(const NetSum& a, const NetSum& b) { return canonical_keys(a) == canonical_keys(b); }

NetSum canonicalize(const NetSum& s) {
    std::vector<CanonicalNet> cs;
    for (const auto& n : s.summands) cs.push_back(canonical_form(n));
    std::sort(cs.begin(), cs.end(), [](const CanonicalNet& a, const CanonicalNet& b) { return a.key < b.key; });
    NetSum out;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i > 0 && cs[i].key == cs[i - 1].key) continue;
        out.summands.push_back(std::move(cs[i].net));
    }
    return out;
}

}  // namespace routenet
