// SPDX-License-Identifier: Apache-2.0
#include "routenet/lang/eval.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "routenet/errors.hpp"

namespace routenet::lang {

const char* to_string(StepRule r) {
    switch (r) {
    case StepRule::Beta: return "beta";
    case StepRule::Get: return "get";
    case StepRule::Set: return "set";
    }
    return "?";
}

namespace {

struct Local {
    StepRule rule;
    TermPtr term;
    TermPtr new_store;  // Set only
};

void reduce_e(const TermPtr& m, const RefValues& st, std::vector<Local>& out) {
    switch (m->kind) {
    case TermKind::App: {
        if (m->a->kind == TermKind::Lam && is_value(*m->b))
            out.push_back({StepRule::Beta, substitute(m->a->a, m->a->name, m->b), nullptr});
        std::vector<Local> sub;
        reduce_e(m->a, st, sub);
        for (auto& s : sub) out.push_back({s.rule, app(s.term, m->b), s.new_store});
        sub.clear();
        reduce_e(m->b, st, sub);
        for (auto& s : sub) out.push_back({s.rule, app(m->a, s.term), s.new_store});
        break;
    }
    case TermKind::Get: {
        auto it = st.find(m->name);
        if (it == st.end()) break;
        std::set<std::string> seen;
        for (const auto& v : it->second)
            if (seen.insert(alpha_key(*v)).second) out.push_back({StepRule::Get, v, nullptr});
        break;
    }
    case TermKind::Set:
        out.push_back({StepRule::Set, star(), store(m->name, m->a)});
        break;
    default:
        break;
    }
}

void reduce_c(const TermPtr& p, const RefValues& st, std::vector<Local>& out) {
    if (p->kind == TermKind::Store) return;
    if (p->kind != TermKind::Par) {
        reduce_e(p, st, out);
        return;
    }
    std::vector<Local> sub;
    reduce_c(p->a, st, sub);
    for (auto& s : sub) out.push_back({s.rule, par(s.term, p->b), s.new_store});
    sub.clear();
    reduce_c(p->b, st, sub);
    for (auto& s : sub) out.push_back({s.rule, par(p->a, s.term), s.new_store});
}

void collect_stores(const TermPtr& p, RefValues& out) {
    if (p->kind == TermKind::Store) out[p->name].push_back(p->a);
    if (p->kind == TermKind::Par) {
        collect_stores(p->a, out);
        collect_stores(p->b, out);
    }
}

/** Skeleton, then the distinct stores in key order. */
TermPtr canonical_state(const TermPtr& p) {
    std::map<std::string, TermPtr> stores;
    for (const auto& [r, vs] : store_of(p))
        for (const auto& v : vs) {
            TermPtr s = store(r, v);
            stores.emplace(alpha_key(*s), s);
        }
    TermPtr out = strip_stores(p);
    for (const auto& [k, s] : stores) out = out ? par(out, s) : s;
    return out;
}

std::string state_key(const TermPtr& p) {
    TermPtr skel = strip_stores(p);
    std::string k = skel ? alpha_key(*skel) : "-";
    std::vector<std::string> ss;
    for (const auto& [r, vs] : store_of(p))
        for (const auto& v : vs) ss.push_back(r + "<=" + alpha_key(*v));
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    for (const auto& s : ss) k += " ; " + s;
    return k;
}

}  // namespace

std::string program_key(const Term& p) {
    std::vector<std::string> ks;
    std::vector<const Term*> stack{&p};
    while (!stack.empty()) {
        const Term* t = stack.back();
        stack.pop_back();
        if (t->kind == TermKind::Par) {
            stack.push_back(t->a.get());
            stack.push_back(t->b.get());
        } else {
            ks.push_back(alpha_key(*t));
        }
    }
    std::sort(ks.begin(), ks.end());
    std::string out;
    for (const auto& k : ks) out += (out.empty() ? "" : " || ") + k;
    return out;
}

RefValues store_of(const TermPtr& p) {
    RefValues out;
    collect_stores(p, out);
    return out;
}

TermPtr strip_stores(const TermPtr& p) {
    if (p->kind == TermKind::Store) return nullptr;
    if (p->kind != TermKind::Par) return p;
    TermPtr l = strip_stores(p->a);
    TermPtr r = strip_stores(p->b);
    if (!l) return r;
    if (!r) return l;
    if (l == p->a && r == p->b) return p;
    return par(l, r);
}

std::vector<Step> steps(const TermPtr& p) {
    RefValues st = store_of(p);
    std::vector<Local> raw;
    reduce_c(p, st, raw);
    std::vector<Step> out;
    std::set<std::string> seen;
    for (auto& l : raw) {
        TermPtr next = l.new_store ? par(l.term, l.new_store) : l.term;
        if (seen.insert(to_string(l.rule) + std::string(":") + program_key(*next)).second) out.push_back({l.rule, next});
    }
    return out;
}

std::vector<TermPtr> step(const TermPtr& p) {
    std::vector<TermPtr> out;
    std::set<std::string> seen;
    for (auto& s : steps(p))
        if (seen.insert(program_key(*s.result)).second) out.push_back(s.result);
    return out;
}

std::vector<Outcome> values(const TermPtr& p, std::size_t budget) {
    std::deque<TermPtr> queue;
    std::unordered_set<std::string> seen;
    std::map<std::string, Outcome> outcomes;
    TermPtr start = canonical_state(p);
    queue.push_back(start);
    seen.insert(state_key(start));
    while (!queue.empty()) {
        TermPtr s = queue.front();
        queue.pop_front();
        auto next = steps(s);
        if (next.empty()) {
            TermPtr skel = strip_stores(s);
            std::vector<TermPtr> vs = skel ? threads(skel) : std::vector<TermPtr>{};
            if (std::all_of(vs.begin(), vs.end(), [](const TermPtr& v) { return is_value(*v); })) {
                std::vector<std::string> ks;
                for (const auto& v : vs) ks.push_back(alpha_key(*v));
                std::sort(ks.begin(), ks.end());
                std::string key;
                for (const auto& k : ks) key += (key.empty() ? "" : " || ") + k;
                outcomes.emplace(key, Outcome{key, skel, vs});
            }
            continue;
        }
        for (auto& n : next) {
            TermPtr c = canonical_state(n.result);
            if (!seen.insert(state_key(c)).second) continue;
            if (seen.size() > budget)
                throw Error(ErrorKind::BudgetExhausted, "more than " + std::to_string(budget) + " program states");
            queue.push_back(c);
        }
    }
    std::vector<Outcome> out;
    for (auto& [k, o] : outcomes) out.push_back(std::move(o));
    return out;
}

TermPtr embed_lthis(const TermPtr& m, const RefValues& vs) {
    if (is_value(*m) || m->kind == TermKind::Set) return m;
    switch (m->kind) {
    case TermKind::App: {
        TermPtr a = app(embed_lthis(m->a, vs), embed_lthis(m->b, vs));
        return vs.empty() ? a : lam_subst(vs, a);
    }
    case TermKind::Get:
        return vs.empty() ? m : down_subst(vs, m);
    case TermKind::Par:
        return par(embed_lthis(m->a, vs), embed_lthis(m->b, vs));
    default:
        throw Error(ErrorKind::DerivationMismatch, "cannot embed `" + print(*m) + "`");
    }
}

TermPtr embed_program(const TermPtr& p) {
    TermPtr skel = strip_stores(p);
    if (!skel) throw Error(ErrorKind::DerivationMismatch, "program has no threads besides its store");
    return embed_lthis(skel, store_of(p));
}

}  // namespace routenet::lang
