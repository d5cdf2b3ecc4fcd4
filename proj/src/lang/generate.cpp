// SPDX-License-Identifier: Apache-2.0
#include "routenet/lang/generate.hpp"

#include <string>
#include <vector>

namespace routenet::lang {

namespace {

class Generator {
public:
    Generator(Rng& g, RegionCtx& r) : g_(g), r_(r) {}

    TermPtr term(const TypePtr& t, const Effect& allowed, std::size_t depth, const VarCtx& env) {
        if (depth == 0) return value(t, 0, env);
        std::vector<int> choices{0, 0, 3, 3};
        for (const auto& [name, rt] : r_.entries)
            if (allowed.count(name) && type_equal(*rt, *t)) choices.push_back(1);
        if (t->kind == TypeKind::Unit)
            for (const auto& [name, rt] : r_.entries)
                if (allowed.count(name)) choices.push_back(2);
        switch (choices[uniform(g_, choices.size())]) {
        case 1: {
            std::vector<std::string> rs;
            for (const auto& [name, rt] : r_.entries)
                if (allowed.count(name) && type_equal(*rt, *t)) rs.push_back(name);
            return get(rs[uniform(g_, rs.size())]);
        }
        case 2: {
            std::vector<std::string> rs;
            for (const auto& [name, rt] : r_.entries)
                if (allowed.count(name)) rs.push_back(name);
            const std::string& r = rs[uniform(g_, rs.size())];
            return set(r, value(r_.find(r), depth - 1, env));
        }
        case 3: {
            TypePtr a = uniform(g_, 3) ? unit_type() : arrow_type(unit_type(), {}, unit_type());
            Effect latent;
            for (const auto& r : allowed)
                if (uniform(g_, 2)) latent.insert(r);
            TypePtr f = arrow_type(a, latent, t);
            return app(term(f, allowed, depth - 1, env), term(a, allowed, depth - 1, env));
        }
        default:
            return value(t, depth, env);
        }
    }

    TermPtr value(const TypePtr& t, std::size_t depth, const VarCtx& env) {
        std::vector<std::string> vs;
        for (const auto& [x, xt] : env)
            if (type_equal(*xt, *t)) vs.push_back(x);
        if (!vs.empty() && uniform(g_, 3) == 0) return var(vs[uniform(g_, vs.size())]);
        if (t->kind == TypeKind::Unit) return star();
        std::string x = "x" + std::to_string(++fresh_);
        VarCtx inner = env;
        inner.emplace_back(x, t->arg);
        return lam(x, term(t->res, t->effect, depth == 0 ? 0 : depth - 1, inner));
    }

private:
    Rng& g_;
    RegionCtx& r_;
    int fresh_ = 0;
};

}  // namespace

RandomProgram random_program(Rng& g, std::size_t max_depth, std::size_t max_refs) {
    RandomProgram out;
    std::size_t nrefs = uniform(g, max_refs + 1);
    TypePtr u = unit_type();
    for (std::size_t k = 0; k < nrefs; ++k) {
        std::string name = "r" + std::to_string(k + 1);
        std::vector<TypePtr> pool{u, arrow_type(u, {}, u)};
        for (const auto& [prev, pt] : out.regions.entries) pool.push_back(arrow_type(u, {prev}, u));
        out.regions.entries.emplace_back(name, pool[uniform(g, pool.size())]);
    }
    Effect all;
    for (const auto& [name, t] : out.regions.entries) all.insert(name);

    Generator gen(g, out.regions);
    std::size_t nthreads = 1 + uniform(g, 3);
    for (std::size_t k = 0; k < nthreads; ++k) {
        TypePtr t = uniform(g, 3) ? u : arrow_type(u, {}, u);
        TermPtr m = gen.term(t, all, max_depth, {});
        out.program = out.program ? par(out.program, m) : m;
    }
    for (const auto& [name, t] : out.regions.entries) {
        std::size_t n = uniform(g, 3);
        for (std::size_t k = 0; k < n; ++k) out.program = par(out.program, store(name, gen.value(t, 2, {})));
    }
    return out;
}

}  // namespace routenet::lang
