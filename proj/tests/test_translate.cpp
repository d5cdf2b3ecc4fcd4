// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <functional>

#include "routenet/canon.hpp"
#include "routenet/errors.hpp"
#include "routenet/lang/eval.hpp"
#include "routenet/lang/generate.hpp"
#include "routenet/rewrite.hpp"
#include "routenet/routing.hpp"
#include "routenet/translate.hpp"
#include "routenet/verify.hpp"

using namespace routenet;
using namespace routenet::lang;

namespace {

const Formula U = Formula::bang(Formula::one());

TermPtr T(const char* s) { return parse_term(s); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Parse;
}

Translation tr(const RegionCtx& r, const TermPtr& t, const VarCtx& g = {}) {
    return translate(typecheck_lthis(r, g, t), r);
}

std::size_t count(const Net& n, Symbol s) {
    std::size_t k = 0;
    for (const auto& c : n.cells) k += c.sym == s;
    return k;
}

Formula free_formula(const Net& n, const std::string& label, bool producer) {
    PortTable t = index_ports(n);
    const FreePort* f = n.find_free(label);
    REQUIRE(f);
    return producer ? inward_type(n, t, f->port) : outward_type(n, t, f->port);
}

}  // namespace

TEST_CASE("type translation") {
    RegionCtx none;
    CHECK(translate_type(*parse_type("Unit"), none) == U);
    CHECK(translate_type(*parse_type("Unit -> Unit"), none) == Formula::bang(Formula::par(U.dual(), U)));
    RegionCtx r = parse_region_ctx("r : Unit");
    Formula xr = Formula::bang(U);
    CHECK(reference_formula("r", r) == xr);
    CHECK(translate_type(*parse_type("Unit -{r}> Unit"), r) ==
          Formula::bang(Formula::par(Formula::tensor(U, xr).dual(), Formula::tensor(xr, U))));
    CHECK(translate_type(*behavior_type(unit_type(), unit_type()), none) == Formula::par(U, U));
    CHECK(kind_of([&] { translate_type(*behavior_type(), none); }) == ErrorKind::DerivationMismatch);
    CHECK(kind_of([&] { translate_type(*parse_type("Unit"), parse_region_ctx("r : Unit -{r}> Unit")); }) ==
          ErrorKind::NotStratified);
    // references are ordered by name in both tensors
    RegionCtx two = parse_region_ctx("b : Unit\na : Unit -> Unit");
    Formula xa = Formula::bang(translate_type(*parse_type("Unit -> Unit"), two));
    Formula xb = Formula::bang(U);
    CHECK(translate_type(*parse_type("Unit -{b,a}> Unit"), two) ==
          Formula::bang(Formula::par(Formula::tensor(Formula::tensor(U, xa), xb).dual(),
                                     Formula::tensor(Formula::tensor(xa, xb), U))));
}

TEST_CASE("translation of values") {
    RegionCtx none;
    Translation s = tr(none, T("*"));
    REQUIRE(s.net.cells.size() == 1);
    CHECK(s.net.cells[0].is_closed_box());
    CHECK(s.net.cells[0].inner->cells.at(0).sym == Symbol::One);
    CHECK(free_formula(s.net, "ret", true) == U);
    CHECK(validate(s.net).empty());

    Translation x = tr(none, T("x"), {{"x", parse_type("Unit -> Unit")}});
    CHECK(x.net.cells.empty());
    CHECK(free_formula(x.net, "var:x", false) == translate_type(*parse_type("Unit -> Unit"), none));

    Translation l = tr(none, T("\\x. y"), {{"y", parse_type("Unit")}});
    REQUIRE(l.net.cells.size() == 1);
    CHECK(l.net.cells[0].is_box());
    CHECK(l.net.cells[0].aux.size() == 1);
    CHECK(validate(l.net).empty());
}

TEST_CASE("translation of get and set") {
    RegionCtx r = parse_region_ctx("r : Unit -> Unit");
    Translation g = tr(r, T("get r"));
    CHECK(g.interface.ref_in.size() == 1);
    CHECK(g.interface.ref_out.size() == 1);
    CHECK(g.interface.ref_in.at("r") == reference_formula("r", r));
    CHECK(free_formula(g.net, "ret", true) == translate_type(*r.find("r"), r));
    CHECK(count(g.net, Symbol::Dereliction) == 1);
    CHECK(count(g.net, Symbol::Coweakening) == 1);
    CHECK(validate(g.net).empty());

    Translation s = tr(r, T("set r (\\x. x)"));
    CHECK(count(s.net, Symbol::Weakening) == 1);
    CHECK(free_formula(s.net, "rout:r", true) == reference_formula("r", r));
    CHECK(validate(s.net).empty());

    // a variable stored under r keeps a cell between the box door and its content
    Translation v = tr(r, T("set r y"), {{"y", r.find("r")}});
    CHECK(validate(v.net).empty());
}

TEST_CASE("an application holds one delta area per reference") {
    RegionCtx r = parse_region_ctx("r : Unit");
    Translation a = tr(r, T("(\\x. x) (get r)"));
    CHECK(validate(a.net).empty());
    Net d = build_area(RoutingArea{delta_relation(), reference_formula("r", r)});
    CHECK(count(a.net, Symbol::Contraction) == count(d, Symbol::Contraction));
    CHECK(count(a.net, Symbol::Cocontraction) == count(d, Symbol::Cocontraction));
    Translation pure = tr(r, T("(\\x. x) *"));
    CHECK(count(pure.net, Symbol::Contraction) == 0);

    Translation p = tr(r, T("get r || set r *"));
    Net g = build_area(RoutingArea{comm(3), reference_formula("r", r)});
    CHECK(count(p.net, Symbol::Contraction) == count(g, Symbol::Contraction));
    CHECK(validate(p.net).empty());
}

TEST_CASE("closing") {
    RegionCtx r = parse_region_ctx("r : Unit");
    Translation s = tr(r, T("*"));
    CHECK(canonical_equal(close(s), s.net));
    CHECK(kind_of([&] { close(s, {"r"}); }) == ErrorKind::InterfaceMismatch);
    Translation g = tr(r, T("get r"));
    Net c = close(g);
    REQUIRE(c.free.size() == 1);
    CHECK(c.free[0].label == "ret");
    CHECK(validate(c).empty());
    // with only the empty source, the dereliction meets a coweakening
    CHECK(normalize(c).is_zero());
    CHECK(kind_of([&] { close(tr(r, T("x"), {{"x", unit_type()}})); }) == ErrorKind::InterfaceMismatch);

    // a written value stays parked in a cocontraction until someone reads r
    Translation up = tr(r, T("up<r := *> set r *"));
    PortTable t = index_ports(up.net);
    PortId rout = up.net.find_free("rout:r")->port;
    const Wire& w = up.net.wires[t.at(rout).wire];
    PortId far = w.a == rout ? w.b : w.a;
    CHECK(up.net.cells[t.at(far).cell].sym == Symbol::Cocontraction);
}

TEST_CASE("compile reference cases") {
    RegionCtx none;
    Net unit = compile(none, T("*"));
    CHECK(canonical_equal(unit, tr(none, T("*")).net));
    NetSum beta = normalize(compile(none, T("(\\x. x) *")));
    REQUIRE(beta.summands.size() == 1);
    CHECK(canonical_equal(beta.summands[0], unit));

    RegionCtx r = parse_region_ctx("r : Unit");
    NetSum read = normalize(compile(r, T("get r || r <= *")));
    REQUIRE(read.summands.size() == 1);
    CHECK(canonical_equal(read.summands[0], unit));
    CHECK(kind_of([&] { compile(r, T("r <= *")); }) == ErrorKind::DerivationMismatch);
}

TEST_CASE("value matcher") {
    RegionCtx none;
    ValueMatcher m(none, T("*"));
    CHECK(m.is_value_net(compile(none, T("*"))));
    CHECK_FALSE(m.is_value_net(compile(none, T("\\z. z"))));
    NetEditor ed;
    CellId one = ed.add_cell(Symbol::One, 0);
    ed.connect(ed.cell(one).principal, ed.add_free("ret"), Formula::one());
    CHECK_FALSE(m.is_value_net(ed.build()));

    RegionCtx r = parse_region_ctx("r : Unit -> Unit");
    ValueMatcher two(r, T("get r || r <= (\\x. x) || r <= (\\x. *)"));
    REQUIRE(two.outcomes().size() == 2);
    CHECK(two.keys(0) != two.keys(1));
}

TEST_CASE("interface typing on random programs") {
    Rng g(31);
    for (int k = 0; k < 100; ++k) {
        RandomProgram rp = random_program(g, 4, 2);
        INFO(print(*rp.program));
        TermPtr em = embed_program(rp.program);
        Derivation d = typecheck_lthis(rp.regions, {}, em);
        Translation t = translate(d, rp.regions);
        REQUIRE(validate(t.net).empty());
        CHECK(free_formula(t.net, "ret", true) == translate_type(*d.result.type, rp.regions));
        CHECK(t.interface.ref_in.size() == d.result.effect.size());
        for (const auto& r : d.result.effect) {
            CHECK(free_formula(t.net, "rin:" + r, false) == reference_formula(r, rp.regions));
            CHECK(free_formula(t.net, "rout:" + r, true) == reference_formula(r, rp.regions));
        }
        CHECK(close(t).free.size() == 1);
    }
}

TEST_CASE("the program suite is well typed and closed") {
    REQUIRE(program_suite().size() >= 15);
    std::set<std::string> rules;
    for (const auto& sp : program_suite()) {
        INFO(sp.name);
        TermPtr p = parse_term(sp.program);
        CHECK(free_vars(*p).empty());
        CHECK_NOTHROW(typecheck_amadio(parse_region_ctx(sp.regions), {}, p));
        std::vector<TermPtr> frontier{p};
        for (int depth = 0; depth < 6 && !frontier.empty(); ++depth) {
            std::vector<TermPtr> next;
            for (const auto& q : frontier)
                for (const auto& s : steps(q)) {
                    rules.insert(to_string(s.rule));
                    next.push_back(s.result);
                }
            frontier = std::move(next);
        }
    }
    CHECK(rules == std::set<std::string>{"beta", "get", "set"});
}

TEST_CASE("simulation and adequacy on the program suite") {
    for (const auto& sp : program_suite()) {
        INFO(sp.name);
        RegionCtx r = parse_region_ctx(sp.regions);
        TermPtr p = parse_term(sp.program);
        SimulationResult s = check_simulation(r, p);
        for (const auto& f : s.failures) INFO(f);
        CHECK(s.ok);
        AdequacyResult a = check_adequacy(r, p);
        INFO(a.detail);
        CHECK(a.ok);
        CHECK(a.value_summands == a.outcomes);
    }
}

TEST_CASE("simulation, adequacy and termination on random programs") {
    Rng g(33);
    for (int k = 0; k < 40; ++k) {
        RandomProgram rp = random_program(g, 3, 2);
        INFO(print(*rp.program));
        CHECK_NOTHROW(normalize(compile(rp.regions, rp.program)));
        CHECK(check_simulation(rp.regions, rp.program).ok);
        CHECK(check_adequacy(rp.regions, rp.program).ok);
    }
}

TEST_CASE("every reduct along a run is simulated") {
    RegionCtx r = parse_region_ctx(program_suite().back().regions);
    TermPtr p = parse_term(program_suite().back().program);
    // follow one path to a normal form, checking each intermediate program
    std::size_t checked = 0;
    while (true) {
        auto s = steps(p);
        if (s.empty()) break;
        CHECK(check_simulation(r, p).ok);
        p = s.back().result;
        ++checked;
    }
    CHECK(checked >= 8);
}
