// SPDX-License-Identifier: Apache-2.0
#include "routenet/translate.hpp"

#include <algorithm>
#include <functional>

#include "routenet/canon.hpp"
#include "routenet/errors.hpp"
#include "routenet/routing.hpp"

namespace routenet {

using namespace lang;

namespace {

[[noreturn]] void mismatch(const std::string& what) { throw Error(ErrorKind::DerivationMismatch, what); }

Formula tensor_all(const std::vector<Formula>& fs) {
    Formula acc = fs.front();
    for (std::size_t k = 1; k < fs.size(); ++k) acc = Formula::tensor(acc, fs[k]);
    return acc;
}

Formula type_formula(const TypeExpr& t, const RegionCtx& r, std::map<std::string, Formula>& cache);

Formula ref_formula(const std::string& ref, const RegionCtx& r, std::map<std::string, Formula>& cache) {
    auto it = cache.find(ref);
    if (it != cache.end()) return it->second;
    TypePtr t = r.find(ref);
    if (!t) mismatch("unknown reference " + ref);
    Formula f = Formula::bang(type_formula(*t, r, cache));
    cache.emplace(ref, f);
    return f;
}

Formula type_formula(const TypeExpr& t, const RegionCtx& r, std::map<std::string, Formula>& cache) {
    switch (t.kind) {
    case TypeKind::Unit:
        return Formula::bang(Formula::one());
    case TypeKind::Behavior:
        if (!t.arg) mismatch("a behaviour has no formula of its own");
        return Formula::par(type_formula(*t.arg, r, cache), type_formula(*t.res, r, cache));
    case TypeKind::Arrow: {
        std::vector<Formula> in{type_formula(*t.arg, r, cache)}, out;
        for (const auto& s : t.effect) {
            Formula x = ref_formula(s, r, cache);
            in.push_back(x);
            out.push_back(x);
        }
        out.push_back(type_formula(*t.res, r, cache));
        return Formula::bang(Formula::par(tensor_all(in).dual(), tensor_all(out)));
    }
    case TypeKind::Reg:
        mismatch("Reg types have no formula");
    }
    return Formula();
}

void require_stratified(const RegionCtx& r) {
    Stratification s = check_stratified(r);
    if (!s.ok) throw Error(ErrorKind::NotStratified, s.reason);
}

/** Open ends of a translated term inside one editor: all are free ports. */
struct Frag {
    PortId ret = 0;
    std::map<std::string, PortId> vars;
    std::map<std::string, PortId> rin;
    std::map<std::string, PortId> rout;
};

std::shared_ptr<const Net> one_inner() {
    static const std::shared_ptr<const Net> net = [] {
        NetEditor in;
        PortId f = in.add_free("");
        CellId o = in.add_cell(Symbol::One, 0);
        in.connect(in.cell(o).principal, f, Formula::one());
        return std::make_shared<const Net>(in.build());
    }();
    return net;
}

/** Replaces free-to-free wires by a contraction whose second copy is discarded. */
void pass_through_cells(NetEditor& ed) {
    std::vector<PortId> ports;
    for (const auto& f : ed.free()) ports.push_back(f.port);
    for (PortId p : ports) {
        if (!ed.is_free(p) || !ed.linked(p)) continue;
        PortId q = ed.partner(p);
        if (!ed.is_free(q)) continue;
        Formula f = ed.type_from(p);
        PortId from = p, to = q;
        if (!f.is_bang()) {
            std::swap(from, to);
            f = f.dual();
        }
        ed.disconnect(p);
        CellId c = ed.add_cell(Symbol::Contraction, 2);
        CellId w = ed.add_cell(Symbol::Weakening, 0);
        ed.connect(from, ed.cell(c).principal, f);
        ed.connect(ed.cell(c).aux[0], to, f);
        ed.connect(ed.cell(c).aux[1], ed.cell(w).principal, f);
    }
}

class Compiler {
public:
    Compiler(const Derivation& d, const RegionCtx& r, const VarCtx& gamma) : d_(d), r_(r) {
        for (const auto& [x, t] : gamma) gamma_[x] = t;
    }

    Formula ty(const TypeExpr& t) { return type_formula(t, r_, cache_); }
    Formula ref(const std::string& s) { return ref_formula(s, r_, cache_); }

    Frag build(NetEditor& ed, const TermPtr& t) {
        switch (t->kind) {
        case TermKind::Var: return build_var(ed, *t);
        case TermKind::Star: return build_star(ed);
        case TermKind::Lam: return build_lam(ed, *t);
        case TermKind::App: return build_app(ed, *t, nullptr);
        case TermKind::LamSubst: return build_app(ed, *t->a, &t->refs);
        case TermKind::Get: return build_get(ed, *t);
        case TermKind::Set: return build_set(ed, *t);
        case TermKind::Par: return build_par(ed, *t);
        case TermKind::VarSubst: return build_var_subst(ed, *t);
        case TermKind::DownSubst: return build_down(ed, *t);
        case TermKind::UpSubst: return build_up(ed, *t);
        case TermKind::Store:
        case TermKind::Sum:
            mismatch("`" + print(*t) + "` has no net");
        }
        mismatch("unknown term");
    }

    /** Pads missing reference ports up to `e`; throws on ports outside `e`. */
    void pad(NetEditor& ed, Frag& f, const Effect& e, const Term& where) {
        for (const auto& [r, p] : f.rin)
            if (!e.count(r)) mismatch("`" + print(where) + "` touches " + r + " outside its effect " + print(e));
        for (const auto& r : e) {
            if (!f.rin.count(r)) f.rin[r] = consumer_stub(ed, ref(r));
            if (!f.rout.count(r)) f.rout[r] = producer_stub(ed, ref(r));
        }
    }

private:
    const Derivation& d_;
    const RegionCtx& r_;
    std::map<std::string, Formula> cache_;
    std::map<std::string, TypePtr> gamma_;

    const Judgement& judge(const Term& t) const { return d_.at(t); }

    // ---- port helpers; a producer port reads its formula towards itself,
    // a consumer port reads its formula away from itself.

    static Formula produced(const NetEditor& ed, PortId p) { return ed.type_from(p).dual(); }
    static Formula consumed(const NetEditor& ed, PortId p) { return ed.type_from(p); }

    static PortId expose(NetEditor& ed, PortId cell_port, Formula f) {
        PortId p = ed.add_free("");
        ed.connect(cell_port, p, f);
        return p;
    }
    static PortId consumer_stub(NetEditor& ed, Formula f) {
        CellId w = ed.add_cell(Symbol::Weakening, 0);
        PortId p = ed.add_free("");
        ed.connect(p, ed.cell(w).principal, f);
        return p;
    }
    static PortId producer_stub(NetEditor& ed, Formula f) {
        CellId w = ed.add_cell(Symbol::Coweakening, 0);
        return expose(ed, ed.cell(w).principal, f);
    }
    static void cap_producer(NetEditor& ed, PortId p) {
        CellId w = ed.add_cell(Symbol::Weakening, 0);
        ed.plug(p, ed.cell(w).principal);
    }
    static void cap_consumer(NetEditor& ed, PortId p) {
        CellId w = ed.add_cell(Symbol::Coweakening, 0);
        ed.plug(p, ed.cell(w).principal);
    }

    static PortId combine_producers(NetEditor& ed, const std::vector<PortId>& ps) {
        PortId acc = ps.front();
        for (std::size_t k = 1; k < ps.size(); ++k) {
            Formula f = Formula::tensor(produced(ed, acc), produced(ed, ps[k]));
            CellId t = ed.add_cell(Symbol::Tensor, 2);
            ed.plug(acc, ed.cell(t).aux[0]);
            ed.plug(ps[k], ed.cell(t).aux[1]);
            acc = expose(ed, ed.cell(t).principal, f);
        }
        return acc;
    }
    static PortId decompose_consumers(NetEditor& ed, const std::vector<PortId>& cs) {
        PortId acc = cs.front();
        for (std::size_t k = 1; k < cs.size(); ++k) {
            Formula f = Formula::par(consumed(ed, acc).dual(), consumed(ed, cs[k]).dual());
            CellId p = ed.add_cell(Symbol::Par, 2);
            ed.plug(acc, ed.cell(p).aux[0]);
            ed.plug(cs[k], ed.cell(p).aux[1]);
            acc = expose(ed, ed.cell(p).principal, f);
        }
        return acc;
    }
    /** Producers of the `n` left-nested tensor components of p's formula. */
    static std::vector<PortId> split_producer(NetEditor& ed, PortId p, std::size_t n) {
        std::vector<PortId> out(n);
        for (std::size_t k = n; k-- > 1;) {
            Formula f = produced(ed, p);
            CellId q = ed.add_cell(Symbol::Par, 2);
            ed.plug(p, ed.cell(q).principal);
            out[k] = expose(ed, ed.cell(q).aux[1], f.right());
            p = expose(ed, ed.cell(q).aux[0], f.left());
        }
        out[0] = p;
        return out;
    }
    static PortId pack(NetEditor& ed, const std::vector<PortId>& ps, Formula f) {
        if (ps.empty()) return producer_stub(ed, f);
        PortId acc = ps.front();
        for (std::size_t k = 1; k < ps.size(); ++k) {
            CellId c = ed.add_cell(Symbol::Cocontraction, 2);
            ed.plug(acc, ed.cell(c).aux[0]);
            ed.plug(ps[k], ed.cell(c).aux[1]);
            acc = expose(ed, ed.cell(c).principal, f);
        }
        return acc;
    }

    static void merge_vars(NetEditor& ed, Frag& into, const std::map<std::string, PortId>& more) {
        for (const auto& [x, p] : more) {
            auto it = into.vars.find(x);
            if (it == into.vars.end()) {
                into.vars[x] = p;
                continue;
            }
            Formula f = consumed(ed, p);
            CellId c = ed.add_cell(Symbol::Contraction, 2);
            PortId merged = ed.add_free("");
            ed.connect(merged, ed.cell(c).principal, f);
            ed.plug(it->second, ed.cell(c).aux[0]);
            ed.plug(p, ed.cell(c).aux[1]);
            it->second = merged;
        }
    }

    /**
     * Boxes `inner_ret` (a producer of A) with the given door consumers, in
     * the inner editor, and returns the outer producer of !A.
     */
    Frag box_up(NetEditor& ed, NetEditor& in, PortId inner_ret, const std::map<std::string, PortId>& doors) {
        Formula a = produced(in, inner_ret);
        std::vector<FreePort> order;
        order.push_back(FreePort{inner_ret, ""});
        for (const auto& [x, p] : doors) order.push_back(FreePort{p, ""});
        if (order.size() != in.free().size()) mismatch("box contents keep unexpected open ports");
        in.free() = order;
        pass_through_cells(in);
        auto inner = std::make_shared<const Net>(in.build());

        Frag f;
        CellId b = ed.add_cell(Symbol::Box, doors.size(), inner);
        f.ret = expose(ed, ed.cell(b).principal, Formula::bang(a));
        std::size_t k = 0;
        for (const auto& [x, p] : doors) {
            Formula door = consumed(in, p);
            PortId v = ed.add_free("");
            ed.connect(v, ed.cell(b).aux[k++], door);
            f.vars[x] = v;
        }
        return f;
    }

    /** box'(V): the value's net inside one more box. */
    PortId boxed_value(NetEditor& ed, Frag& host, const TermPtr& v) {
        NetEditor in;
        Frag fv = build(in, v);
        Frag outer = box_up(ed, in, fv.ret, fv.vars);
        merge_vars(ed, host, outer.vars);
        return outer.ret;
    }

    Frag build_var(NetEditor& ed, const Term& t) {
        Formula f = ty(*judge(t).type);
        Frag out;
        out.vars[t.name] = ed.add_free("");
        out.ret = ed.add_free("");
        ed.connect(out.vars[t.name], out.ret, f);
        return out;
    }

    Frag build_star(NetEditor& ed) {
        Frag out;
        CellId b = ed.add_cell(Symbol::Box, 0, one_inner());
        out.ret = expose(ed, ed.cell(b).principal, Formula::bang(Formula::one()));
        return out;
    }

    Frag build_lam(NetEditor& ed, const Term& t) {
        const TypeExpr& at = *judge(t).type;
        if (at.kind != TypeKind::Arrow) mismatch("abstraction without an arrow type");
        const Effect& latent = at.effect;
        NetEditor in;
        Frag body = build(in, t.a);
        pad(in, body, latent, *t.a);

        PortId x;
        auto it = body.vars.find(t.name);
        if (it != body.vars.end()) {
            x = it->second;
            body.vars.erase(it);
        } else {
            x = consumer_stub(in, ty(*at.arg));
        }
        std::vector<PortId> ins{x}, outs;
        for (const auto& s : latent) {
            ins.push_back(body.rin.at(s));
            outs.push_back(body.rout.at(s));
        }
        outs.push_back(body.ret);
        PortId i = decompose_consumers(in, ins);
        PortId o = combine_producers(in, outs);
        Formula f = Formula::par(consumed(in, i).dual(), produced(in, o));
        CellId p = in.add_cell(Symbol::Par, 2);
        in.plug(i, in.cell(p).aux[0]);
        in.plug(o, in.cell(p).aux[1]);
        PortId top = expose(in, in.cell(p).principal, f);
        return box_up(ed, in, top, body.vars);
    }

    struct Plugs {
        PortId in = 0, out = 0;  // consumer, producer
    };

    /** An area over !X with the given relation, spliced in; ports per plug label. */
    std::map<std::string, Plugs> area(NetEditor& ed, const Multirelation& rel, Formula x) {
        Net a = build_area(RoutingArea{rel, x});
        auto m = ed.splice(a);
        std::map<std::string, Plugs> out;
        for (const auto& l : rel.domain()) out[l].in = m.at(input_port(a, l));
        for (const auto& l : rel.codomain()) out[l].out = m.at(output_port(a, l));
        return out;
    }

    /** Port of `f` for reference r, or a stub when r is not in its effect. */
    static PortId take(NetEditor& ed, std::map<std::string, PortId>& ports, const std::string& r, bool producer, Formula x) {
        auto it = ports.find(r);
        if (it == ports.end()) return producer ? producer_stub(ed, x) : consumer_stub(ed, x);
        PortId p = it->second;
        ports.erase(it);
        return p;
    }

    Frag build_app(NetEditor& ed, const Term& t, const RefValues* vs) {
        if (t.kind != TermKind::App) mismatch("a lambda-substitution must wrap an application");
        const Judgement& j = judge(t);
        const TypeExpr& ft = *judge(*t.a).type;
        if (ft.kind != TypeKind::Arrow) mismatch("application of a non-function");
        const Effect& latent = ft.effect;
        Frag fm = build(ed, t.a);
        Frag fn = build(ed, t.b);

        Frag out;
        out.vars = fm.vars;
        merge_vars(ed, out, fn.vars);

        CellId d = ed.add_cell(Symbol::Dereliction, 1);
        Formula fun = produced(ed, fm.ret);
        ed.plug(fm.ret, ed.cell(d).principal);
        Formula inside = fun.left().dual();  // I * O^
        CellId c = ed.add_cell(Symbol::Tensor, 2);
        ed.connect(ed.cell(c).principal, ed.cell(d).aux[0], inside);
        PortId o = expose(ed, ed.cell(c).aux[1], inside.right().dual());
        std::vector<PortId> results = split_producer(ed, o, latent.size() + 1);
        out.ret = results.back();

        std::map<std::string, PortId> call_in;  // producers into I
        std::map<std::string, PortId> call_out;  // producers out of O
        {
            std::size_t k = 0;
            for (const auto& s : latent) call_out[s] = results[k++];
        }

        for (const auto& r : j.effect) {
            Formula x = ref(r);
            auto plugs = area(ed, delta_relation(), x);
            ed.fuse(take(ed, fm.rout, r, true, x), plugs["1"].in);
            ed.fuse(plugs["1"].out, take(ed, fm.rin, r, false, x));
            ed.fuse(take(ed, fn.rout, r, true, x), plugs["2"].in);
            ed.fuse(plugs["2"].out, take(ed, fn.rin, r, false, x));
            ed.fuse(take(ed, call_out, r, true, x), plugs["3"].in);
            if (latent.count(r)) {
                call_in[r] = plugs["3"].out;
            } else {
                cap_producer(ed, plugs["3"].out);
            }
            out.rin[r] = plugs["4"].in;
            out.rout[r] = plugs["4"].out;
        }
        if (!fm.rin.empty() || !fn.rin.empty() || !call_out.empty())
            mismatch("`" + print(t) + "` has effects outside " + print(j.effect));

        std::vector<PortId> ins{fn.ret};
        for (const auto& s : latent) {
            std::vector<PortId> pieces{call_in.at(s)};
            if (vs) {
                auto it = vs->find(s);
                if (it != vs->end())
                    for (const auto& v : it->second) pieces.push_back(boxed_value(ed, out, v));
            }
            ins.push_back(pack(ed, pieces, ref(s)));
        }
        ed.plug(combine_producers(ed, ins), ed.cell(c).aux[0]);
        return out;
    }

    Frag build_get(NetEditor& ed, const Term& t) {
        Formula x = ref(t.name);
        Frag out;
        CellId d = ed.add_cell(Symbol::Dereliction, 1);
        PortId q = ed.add_free("");
        ed.connect(q, ed.cell(d).principal, x);
        out.rin[t.name] = q;
        out.ret = expose(ed, ed.cell(d).aux[0], x.left());
        out.rout[t.name] = producer_stub(ed, x);
        return out;
    }

    Frag build_set(NetEditor& ed, const Term& t) {
        Frag out = build_star(ed);
        out.rin[t.name] = consumer_stub(ed, ref(t.name));
        out.rout[t.name] = boxed_value(ed, out, t.a);
        return out;
    }

    Frag build_par(NetEditor& ed, const Term& t) {
        const Judgement& j = judge(t);
        Frag f1 = build(ed, t.a);
        Frag f2 = build(ed, t.b);
        Frag out;
        out.vars = f1.vars;
        merge_vars(ed, out, f2.vars);
        Formula a1 = produced(ed, f1.ret), a2 = produced(ed, f2.ret);
        CellId p = ed.add_cell(Symbol::Par, 2);
        ed.plug(f1.ret, ed.cell(p).aux[0]);
        ed.plug(f2.ret, ed.cell(p).aux[1]);
        out.ret = expose(ed, ed.cell(p).principal, Formula::par(a1, a2));
        for (const auto& r : j.effect) {
            Formula x = ref(r);
            auto plugs = area(ed, comm(3), x);
            ed.fuse(take(ed, f1.rout, r, true, x), plugs["1"].in);
            ed.fuse(plugs["1"].out, take(ed, f1.rin, r, false, x));
            ed.fuse(take(ed, f2.rout, r, true, x), plugs["2"].in);
            ed.fuse(plugs["2"].out, take(ed, f2.rin, r, false, x));
            out.rin[r] = plugs["3"].in;
            out.rout[r] = plugs["3"].out;
        }
        if (!f1.rin.empty() || !f2.rin.empty()) mismatch("`" + print(t) + "` has effects outside " + print(j.effect));
        return out;
    }

    Frag build_var_subst(NetEditor& ed, const Term& t) {
        Frag out = build(ed, t.a);
        std::vector<std::map<std::string, PortId>> value_vars;
        for (const auto& [x, v] : t.sigma) {
            Frag fv = build(ed, v);
            auto it = out.vars.find(x);
            if (it != out.vars.end()) {
                ed.fuse(fv.ret, it->second);
                out.vars.erase(it);
            } else {
                cap_producer(ed, fv.ret);
            }
            value_vars.push_back(fv.vars);
        }
        for (const auto& vv : value_vars) merge_vars(ed, out, vv);
        return out;
    }

    Frag build_down(NetEditor& ed, const Term& t) {
        Frag out = build(ed, t.a);
        for (const auto& [r, vs] : t.refs) {
            auto it = out.rin.find(r);
            if (it == out.rin.end()) continue;
            Formula x = ref(r);
            PortId fresh_in = ed.add_free("");
            PortId through = ed.add_free("");
            ed.connect(fresh_in, through, x);
            std::vector<PortId> pieces{through};
            for (const auto& v : vs) pieces.push_back(boxed_value(ed, out, v));
            ed.fuse(pack(ed, pieces, x), it->second);
            it->second = fresh_in;
        }
        return out;
    }

    Frag build_up(NetEditor& ed, const Term& t) {
        Frag out = build(ed, t.a);
        for (const auto& [r, vs] : t.refs) {
            auto it = out.rout.find(r);
            if (it == out.rout.end()) continue;
            std::vector<PortId> pieces{it->second};
            for (const auto& v : vs) pieces.push_back(boxed_value(ed, out, v));
            it->second = pack(ed, pieces, ref(r));
        }
        return out;
    }
};

}  // namespace

Formula translate_type(const TypeExpr& t, const RegionCtx& r) {
    require_stratified(r);
    std::map<std::string, Formula> cache;
    return type_formula(t, r, cache);
}

Formula reference_formula(const std::string& ref, const RegionCtx& r) {
    require_stratified(r);
    std::map<std::string, Formula> cache;
    return ref_formula(ref, r, cache);
}

Translation translate(const Derivation& d, const RegionCtx& r, const VarCtx& gamma) {
    require_stratified(r);
    Compiler comp(d, r, gamma);
    NetEditor ed;
    Frag f = comp.build(ed, d.term);
    comp.pad(ed, f, d.result.effect, *d.term);

    Translation out;
    out.type = d.result.type;
    out.effect = d.result.effect;
    out.interface.output = "ret";
    std::vector<FreePort> order;
    order.push_back(FreePort{f.ret, "ret"});
    for (const auto& [x, p] : f.vars) {
        order.push_back(FreePort{p, "var:" + x});
        out.interface.vars[x] = ed.type_from(p);
    }
    for (const auto& [s, p] : f.rin) {
        order.push_back(FreePort{p, "rin:" + s});
        out.interface.ref_in[s] = ed.type_from(p);
    }
    for (const auto& [s, p] : f.rout) {
        order.push_back(FreePort{p, "rout:" + s});
        out.interface.ref_out[s] = ed.type_from(p).dual();
    }
    if (order.size() != ed.free().size()) mismatch("translation left stray open ports");
    ed.free() = order;
    out.net = ed.build();
    return out;
}

Net close(const Translation& t, const Effect& e) {
    NetEditor ed(t.net);
    std::set<std::string> rin, rout;
    std::vector<PortId> ports;
    for (const auto& f : t.net.free) ports.push_back(f.port);
    for (const auto& f : t.net.free) {
        if (f.label == "ret") continue;
        if (f.label.rfind("rin:", 0) == 0) {
            rin.insert(f.label.substr(4));
            CellId w = ed.add_cell(Symbol::Coweakening, 0);
            ed.plug(f.port, ed.cell(w).principal);
        } else if (f.label.rfind("rout:", 0) == 0) {
            rout.insert(f.label.substr(5));
            CellId w = ed.add_cell(Symbol::Weakening, 0);
            ed.plug(f.port, ed.cell(w).principal);
        } else {
            throw Error(ErrorKind::InterfaceMismatch, "open port " + f.label + " cannot be closed");
        }
    }
    if (rin != e || rout != e)
        throw Error(ErrorKind::InterfaceMismatch, "reference ports differ from the effect " + print(e));
    return ed.build();
}

Net close(const Translation& t) { return close(t, t.effect); }

Net compile(const RegionCtx& r, const TermPtr& program) {
    TermPtr em = embed_program(program);
    Derivation d = typecheck_lthis(r, {}, em);
    return close(translate(d, r));
}

ValueMatcher::ValueMatcher(const RegionCtx& r, const TermPtr& program, std::size_t budget) {
    outcomes_ = values(program, budget);
    TypePtr expected = typecheck_lthis(r, {}, embed_program(program)).result.type;
    for (std::size_t k = 0; k < outcomes_.size(); ++k) {
        const TermPtr& t = outcomes_[k].representative;
        std::vector<std::string> ks;
        if (t) {
            Derivation d = typecheck_lthis(r, {}, t, expected);
            NormalizeOptions opt;
            opt.budget = budget;
            ks = canonical_keys(normalize(close(translate(d, r)), opt));
        }
        for (const auto& key : ks) index_.emplace(key, static_cast<int>(k));
        keys_.push_back(std::move(ks));
    }
}

int ValueMatcher::match(const Net& n) const {
    auto it = index_.find(canonical_key(n));
    return it == index_.end() ? -1 : it->second;
}

}  // namespace routenet
