// SPDX-License-Identifier: Apache-2.0
#include "routenet/verify.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "routenet/canon.hpp"
#include "routenet/errors.hpp"
#include "routenet/lang/eval.hpp"
#include "routenet/multirel.hpp"
#include "routenet/random.hpp"
#include "routenet/routing.hpp"
#include "routenet/translate.hpp"

namespace routenet {

using namespace lang;

const std::vector<SuiteProgram>& program_suite() {
    static const std::vector<SuiteProgram> suite{
        {"unit", "", "*"},
        {"identity", "", "(\\x. x) *"},
        {"first", "", "(\\x. \\y. x) * *"},
        {"apply", "", "(\\f. f *) (\\x. x)"},
        {"nested", "", "(\\x. x) ((\\y. y) *)"},
        {"function-result", "", "((\\x. x) (\\y. y)) *"},
        {"fork", "", "(\\x. x || *) *"},
        {"write", "r : Unit", "set r *"},
        {"read-store", "r : Unit", "get r || r <= *"},
        {"read-write", "r : Unit", "(\\x. x) (get r) || set r *"},
        {"write-bound", "r : Unit", "(\\x. set r x) * || get r"},
        {"discard-read", "r : Unit", "(\\x. *) (get r) || set r *"},
        {"two-readers", "r : Unit", "get r || get r || r <= *"},
        {"starving", "r : Unit", "get r || *"},
        {"choice", "r : Unit -> Unit", "get r || r <= (\\x. x) || r <= (\\x. *)"},
        {"call-stored", "r : Unit -> Unit", "(\\f. f *) (get r) || set r (\\x. x)"},
        {"latent", "s : Unit", "(\\f. f *) (\\x. get s) || set s *"},
        {"stored-reader", "s : Unit\nr : Unit -{s}> Unit", "set r (\\x. get s) || (\\f. f *) (get r) || set s *"},
        {"proj",
         "r : (Unit -> Unit) -> (Unit -> Unit) -> Unit -> Unit\n"
         "s : (Unit -> Unit) -> (Unit -> Unit) -> Unit -> Unit",
         "(\\x. x (\\z. z) (\\z. *)) (get r) || (\\y. set r y) (get s)"
         " || set s (\\a. \\b. a) || set s (\\a. \\b. b)"},
    };
    return suite;
}

namespace {

std::set<std::string> nf_keys(const RegionCtx& r, const TermPtr& p, std::size_t budget) {
    NormalizeOptions opt;
    opt.budget = budget;
    auto ks = canonical_keys(normalize(compile(r, p), opt));
    return {ks.begin(), ks.end()};
}

}  // namespace

SimulationResult check_simulation(const RegionCtx& r, const TermPtr& p, std::size_t budget) {
    SimulationResult out;
    std::set<std::string> whole = nf_keys(r, p, budget);
    for (const auto& s : steps(p)) {
        ++out.steps_checked;
        std::set<std::string> part = nf_keys(r, s.result, budget);
        if (!std::includes(whole.begin(), whole.end(), part.begin(), part.end())) {
            out.ok = false;
            out.failures.push_back(std::string(to_string(s.rule)) + " step to `" + print(*s.result) +
                                   "` is not matched by the net");
        }
    }
    return out;
}

AdequacyResult check_adequacy(const RegionCtx& r, const TermPtr& p, std::size_t budget) {
    AdequacyResult out;
    ValueMatcher m(r, p, budget);
    out.outcomes = m.outcomes().size();
    NormalizeOptions opt;
    opt.budget = budget;
    NetSum nf = normalize(compile(r, p), opt);
    std::vector<int> hits(m.outcomes().size(), 0);
    for (const auto& s : nf.summands) {
        int k = m.match(s);
        if (k < 0) {
            ++out.garbage;
        } else {
            ++out.value_summands;
            ++hits[static_cast<std::size_t>(k)];
        }
    }
    for (std::size_t k = 0; k < hits.size(); ++k) {
        if (hits[k] != 1) {
            out.ok = false;
            out.detail += "outcome `" + print(*m.outcomes()[k].representative) + "` matched by " +
                          std::to_string(hits[k]) + " summands; ";
        }
    }
    return out;
}

namespace {

std::string check_trace_case(Rng& g, std::size_t budget) {
    Multirelation r = random_area(g, 4, 4, 3);
    std::vector<std::pair<std::size_t, std::size_t>> zeros;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t o = 0; o < r.cols(); ++o)
            if (r.at(i, o) == 0) zeros.emplace_back(i, o);
    if (zeros.empty()) {
        r.set(0, 0, 0);
        zeros.emplace_back(0, 0);
    }
    auto [i, o] = zeros[uniform(g, zeros.size())];
    const std::string& in = r.domain()[i];
    const std::string& out = r.codomain()[o];
    Multirelation want = trace_formula(r, in, out);
    Multirelation got = semantics(trace_net(build_area(r), in, out, budget), budget);
    if (got == want) return "";
    return "trace at (" + in + "," + out + ") gives\n" + format_matrix(got) + "expected\n" + format_matrix(want);
}

Multirelation square(Rng& g, const std::string& in, const std::string& out) {
    LabelSet a, b;
    for (int k = 1; k <= 3; ++k) {
        a.push_back(in + std::to_string(k));
        b.push_back(out + std::to_string(k));
    }
    Multirelation r(a, b);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r.set(i, j, static_cast<Count>(uniform(g, 3)));
    return r;
}

std::string check_compose_case(Rng& g, std::size_t budget) {
    Multirelation r = square(g, "a", "b");
    Multirelation s = square(g, "b", "c");
    Net n = compose_areas(build_area(r), r.codomain(), build_area(s), s.domain(), budget);
    std::map<std::string, std::string> in, out;
    for (const auto& x : r.domain()) in["L." + x] = x;
    for (const auto& x : s.codomain()) out["R." + x] = x;
    Multirelation got = relabel(semantics(n, budget), in, out);
    Multirelation want = compose(r, s);
    if (got == want) return "";
    return "composite gives\n" + format_matrix(got) + "expected\n" + format_matrix(want);
}

std::string check_paths_case(Rng& g, std::size_t budget) {
    Net n = random_routing_net(g, 25);
    Multirelation a = semantics(n, budget);
    Multirelation b = path_semantics(n);
    if (a == b) return "";
    return "normal form gives\n" + format_matrix(a) + "paths give\n" + format_matrix(b);
}

std::string check_program_case(const std::string& suite, std::size_t k, std::size_t budget) {
    const auto& progs = program_suite();
    const SuiteProgram& sp = progs[k % progs.size()];
    RegionCtx r = parse_region_ctx(sp.regions);
    TermPtr p = parse_term(sp.program);
    typecheck_amadio(r, {}, p);
    if (suite == "simulate") {
        SimulationResult s = check_simulation(r, p, budget);
        if (s.ok) return "";
        std::string why = sp.name + ":";
        for (const auto& f : s.failures) why += " " + f + ";";
        return why;
    }
    AdequacyResult a = check_adequacy(r, p, budget);
    return a.ok ? "" : sp.name + ": " + a.detail;
}

}  // namespace

SuiteReport run_suite(const std::string& suite, std::uint64_t seed, std::size_t cases, std::size_t budget) {
    static const std::set<std::string> known{"trace", "compose", "paths", "simulate", "adequacy"};
    if (!known.count(suite)) throw Error(ErrorKind::DomainMismatch, "unknown suite '" + suite + "'");
    SuiteReport rep;
    rep.suite = suite;
    rep.seed = seed;
    rep.cases = cases;
    for (std::size_t k = 0; k < cases; ++k) {
        Rng g(seed + k);
        std::string why;
        try {
            if (suite == "trace") why = check_trace_case(g, budget);
            else if (suite == "compose") why = check_compose_case(g, budget);
            else if (suite == "paths") why = check_paths_case(g, budget);
            else why = check_program_case(suite, k, budget);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::BudgetExhausted) throw;
            why = std::string(to_string(e.kind())) + ": " + e.what();
        }
        if (why.empty()) {
            ++rep.passed;
        } else {
            rep.failures.push_back("case " + std::to_string(k) + ": " + why);
        }
    }
    return rep;
}

}  // namespace routenet
