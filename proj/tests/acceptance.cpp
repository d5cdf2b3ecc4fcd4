// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "oracles.hpp"
#include "routenet/canon.hpp"
#include "routenet/errors.hpp"
#include "routenet/lang/eval.hpp"
#include "routenet/net_io.hpp"
#include "routenet/paths.hpp"
#include "routenet/random.hpp"
#include "routenet/rewrite.hpp"
#include "routenet/routing.hpp"
#include "routenet/translate.hpp"
#include "routenet/verify.hpp"

using namespace routenet;

namespace {

struct Tally {
    std::size_t cases = 0;
    std::size_t passed = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++cases;
        if (ok) ++passed;
        else if (first_failure.empty()) first_failure = what;
    }
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Tally()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Tally t;
    try {
        t = body();
    } catch (const std::exception& e) {
        t.record(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = t.passed == t.cases && t.cases > 0 && (limit_s <= 0 || secs < limit_s);
    if (!ok) ++failures;
    std::printf("criterion %2d %-28s %s  %zu/%zu  %.2f s", id, name, ok ? "PASS" : "FAIL", t.passed, t.cases, secs);
    if (limit_s > 0) std::printf(" (limit %.0f s)", limit_s);
    if (!t.first_failure.empty()) std::printf("  first failure: %s", t.first_failure.c_str());
    std::printf("\n");
    std::fflush(stdout);
}

/** The 200 areas of criteria 1 and 2, each with a zero entry to trace. */
struct TraceCase {
    Multirelation rel;
    std::string in, out;
};

std::vector<TraceCase> trace_cases() {
    Rng g(101);
    std::vector<TraceCase> out;
    while (out.size() < 200) {
        Multirelation r = random_area(g, 4, 4, 3);
        std::vector<std::pair<std::size_t, std::size_t>> zeros;
        for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t o = 0; o < r.cols(); ++o)
                if (r.at(i, o) == 0) zeros.emplace_back(i, o);
        if (zeros.empty()) continue;
        auto [i, o] = zeros[uniform(g, zeros.size())];
        out.push_back({r, r.domain()[i], r.codomain()[o]});
    }
    return out;
}

std::vector<Net> routing_nets() {
    Rng g(102);
    std::vector<Net> out;
    for (int k = 0; k < 200; ++k) out.push_back(random_routing_net(g, 25));
    return out;
}

Multirelation square(Rng& g, const LabelSet& a, const LabelSet& b) {
    Multirelation r(a, b);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r.set(i, j, static_cast<Count>(uniform(g, 4)));
    return r;
}

}  // namespace

int main() {
    const auto areas = trace_cases();
    const auto nets = routing_nets();

    criterion(1, "trace formula", 10, [&] {
        Tally t;
        for (const auto& c : areas) {
            Multirelation got = semantics(trace_net(build_area(c.rel), c.in, c.out));
            bool ok = got == trace_formula(c.rel, c.in, c.out) && oracle::entries(got) == oracle::walk_trace(c.rel, c.in, c.out);
            t.record(ok, "trace at (" + c.in + "," + c.out + ")");
        }
        return t;
    });

    criterion(2, "path semantics", 30, [&] {
        Tally t;
        for (const auto& c : areas) {
            Net n = build_area(c.rel);
            t.record(semantics(n) == path_semantics(n) && path_semantics(n) == c.rel, "area");
        }
        for (const auto& n : nets) t.record(semantics(n) == path_semantics(n), "routing net");
        return t;
    });

    criterion(3, "composition", 10, [&] {
        Tally t;
        Rng g(103);
        LabelSet a{"a1", "a2", "a3"}, m{"m1", "m2", "m3"}, z{"z1", "z2", "z3"};
        for (int k = 0; k < 100; ++k) {
            Multirelation r = square(g, a, m), s = square(g, m, z);
            Net c = compose_areas(build_area(r), m, build_area(s), m);
            std::map<std::string, std::string> in, out;
            for (const auto& x : a) in["L." + x] = x;
            for (const auto& x : z) out["R." + x] = x;
            Multirelation got = relabel(semantics(c), in, out);
            t.record(got == compose(r, s) && oracle::entries(got) == oracle::walk_compose(r, s), "pair " + std::to_string(k));
        }
        return t;
    });

    criterion(4, "characterization round trip", 0, [&] {
        Tally t;
        for (const auto& n : nets) {
            NetSum nf = normalize(n);
            bool ok = nf.summands.size() == 1;
            if (ok) {
                try {
                    RoutingArea a = read_area(nf.summands[0]);
                    ok = a.rel == semantics(n);
                } catch (const Error& e) {
                    ok = false;
                }
            }
            t.record(ok, "net with " + std::to_string(n.cells.size()) + " cells");
        }
        return t;
    });

    criterion(5, "path preservation", 0, [&] {
        Tally t;
        for (const auto& n : nets) {
            Multirelation before = path_semantics(n);
            oracle::Entries walk = oracle::path_matrix(n);
            bool ok = true;
            for (const auto& r : find_redexes(n, Policy::All)) {
                NetSum s = apply(n, r);
                if (s.summands.size() != 1) {
                    ok = false;
                    break;
                }
                ok = ok && path_semantics(s.summands[0]) == before && oracle::path_matrix(s.summands[0]) == walk;
            }
            t.record(ok, "net with " + std::to_string(n.cells.size()) + " cells");
        }
        return t;
    });

    criterion(6, "transit", 0, [&] {
        Tally t;
        Rng g(106);
        for (int k = 0; k < 50; ++k) {
            Multirelation r = random_area(g, 4, 4, 3);
            Net a = build_area(r);
            const std::string in = r.domain()[uniform(g, r.rows())];
            TransitResult tr = transit(a, in);
            bool ok = canonical_equal(tr.residual, a);
            for (const auto& o : r.codomain()) ok = ok && tr.copies.at(o) == r(in, o);
            t.record(ok, "area " + std::to_string(k) + " input " + in);
        }
        return t;
    });

    criterion(7, "confluence and termination", 0, [&] {
        Tally t;
        Rng g(107);
        for (int k = 0; k < 100; ++k) {
            Net n = random_valid_net(g, 12);
            auto gr = reduction_graph(n, 20000);
            auto sinks = gr.sinks();
            bool ok = !gr.truncated && (sinks.empty() || (sinks.size() == 1 && !gr.has_cycle()));
            t.record(ok, "net " + std::to_string(k) + (gr.truncated ? " (graph truncated)" : ""));
        }
        return t;
    });

    criterion(8, "simulation", 60, [&] {
        Tally t;
        for (const auto& sp : program_suite()) {
            lang::RegionCtx r = lang::parse_region_ctx(sp.regions);
            lang::TermPtr p = lang::parse_term(sp.program);
            lang::typecheck_amadio(r, {}, p);
            SimulationResult s = check_simulation(r, p);
            t.record(s.ok, sp.name + (s.failures.empty() ? "" : ": " + s.failures[0]));
            if (sp.name == "proj") {
                ValueMatcher m(r, p);
                NetSum nf = normalize(compile(r, p));
                std::set<int> hit;
                std::size_t values = 0;
                for (const auto& n : nf.summands) {
                    int k = m.match(n);
                    if (k >= 0) {
                        ++values;
                        hit.insert(k);
                    }
                }
                t.record(m.outcomes().size() == 2 && values == 2 && hit.size() == 2, "proj has two value summands");
            }
        }
        if (program_suite().size() < 15) t.record(false, "suite too small");
        return t;
    });

    criterion(9, "adequacy", 0, [&] {
        Tally t;
        for (const auto& sp : program_suite()) {
            AdequacyResult a = check_adequacy(lang::parse_region_ctx(sp.regions), lang::parse_term(sp.program));
            t.record(a.ok && a.value_summands == a.outcomes, sp.name + ": " + a.detail);
        }
        return t;
    });

    criterion(10, "serialization", 0, [&] {
        Tally t;
        Rng g(110);
        for (int k = 0; k < 500; ++k) {
            Net n = k % 2 ? random_valid_net(g, 12) : random_routing_net(g, 25);
            std::string s = serialize(n);
            NetSum back = parse_net_sum(serialize(NetSum(n)));
            bool ok = back.summands.size() == 1 && serialize(back.summands[0]) == s &&
                      serialize(parse_net_sum(s, true)) == serialize(NetSum(n)) && canonical_equal(back.summands[0], n);
            t.record(ok, "net " + std::to_string(k));
        }
        return t;
    });

    std::printf("%s\n", failures == 0 ? "all criteria pass" : "some criteria fail");
    return failures == 0 ? 0 : 1;
}
