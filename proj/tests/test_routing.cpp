// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "routenet/canon.hpp"
#include "routenet/errors.hpp"
#include "routenet/random.hpp"
#include "routenet/rewrite.hpp"
#include "routenet/routing.hpp"

using namespace routenet;

namespace {

const Formula A = Formula::bang(Formula::one());

Multirelation M(LabelSet in, LabelSet out, std::vector<std::vector<Count>> rows) {
    return Multirelation::from_rows(std::move(in), std::move(out), rows);
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Parse;
}

Multirelation from_entries(const LabelSet& in, const LabelSet& out, const oracle::Entries& e) {
    Multirelation r(in, out);
    for (const auto& [k, v] : e) r.set(k.first, k.second, v);
    return r;
}

}  // namespace

TEST_CASE("build_area degenerate shapes") {
    Net z = build_area(M({"i"}, {"o"}, {{0}}));
    REQUIRE(z.cells.size() == 2);
    CHECK(z.cells[0].sym == Symbol::Weakening);
    CHECK(z.cells[1].sym == Symbol::Coweakening);

    Net one = build_area(M({"i"}, {"o"}, {{1}}));
    CHECK(one.cells.empty());
    CHECK(one.wires.size() == 1);
    CHECK(canonical_equal(one, oracle::free_wire(A)));

    Net c3 = build_area(comm(3));
    CHECK(validate(c3).empty());
    CHECK(is_routing_net(c3));
    CHECK(find_redexes(c3, Policy::All).empty());
    CHECK(c3.cells.size() == 6);
}

TEST_CASE("routing net recognition") {
    CHECK(is_routing_net(oracle::free_wire(A)));
    NetEditor ed;
    CellId t = ed.add_cell(Symbol::Tensor, 2);
    ed.connect(ed.cell(t).principal, ed.add_free("o"), Formula::tensor(A, A));
    ed.connect(ed.add_free("a"), ed.cell(t).aux[0], A);
    ed.connect(ed.add_free("b"), ed.cell(t).aux[1], A);
    CHECK_FALSE(is_routing_net(ed.build()));
    CHECK_FALSE(is_routing_net(payload_box()));
}

TEST_CASE("read_area inverts build_area") {
    Rng g(21);
    for (int k = 0; k < 200; ++k) {
        Multirelation r = random_area(g, 4, 4, 3);
        Net n = build_area(r);
        RoutingArea a = read_area(n);
        CHECK(a.rel == r);
        CHECK(canonical_equal(build_area(a), n));
    }
    CHECK(read_area(oracle::free_wire(A)).rel == M({"i"}, {"o"}, {{1}}));
}

TEST_CASE("read_area of the bialgebra right-hand side") {
    NetEditor ed;
    CellId k = ed.add_cell(Symbol::Cocontraction, 2);
    CellId c = ed.add_cell(Symbol::Contraction, 2);
    ed.connect(ed.add_free("a"), ed.cell(k).aux[0], A);
    ed.connect(ed.add_free("b"), ed.cell(k).aux[1], A);
    ed.connect(ed.cell(k).principal, ed.cell(c).principal, A);
    ed.connect(ed.cell(c).aux[0], ed.add_free("x"), A);
    ed.connect(ed.cell(c).aux[1], ed.add_free("y"), A);
    Net n = ed.build();
    CHECK(kind_of([&] { read_area(n); }) == ErrorKind::NotNormal);
    NetSum s = apply(n, find_redexes(n, Policy::All).front());
    REQUIRE(s.summands.size() == 1);
    Multirelation ones = M({"a", "b"}, {"x", "y"}, {{1, 1}, {1, 1}});
    CHECK(read_area(s.summands[0]).rel == ones);
    CHECK(path_semantics(s.summands[0]) == ones);
    CHECK(path_semantics(n) == ones);
}

TEST_CASE("semantics of single cells") {
    NetEditor c;
    CellId x = c.add_cell(Symbol::Contraction, 2);
    c.connect(c.add_free("i"), c.cell(x).principal, A);
    c.connect(c.cell(x).aux[0], c.add_free("o1"), A);
    c.connect(c.cell(x).aux[1], c.add_free("o2"), A);
    CHECK(semantics(c.build()) == M({"i"}, {"o1", "o2"}, {{1, 1}}));

    NetEditor k;
    CellId y = k.add_cell(Symbol::Cocontraction, 2);
    k.connect(k.add_free("i1"), k.cell(y).aux[0], A);
    k.connect(k.add_free("i2"), k.cell(y).aux[1], A);
    k.connect(k.cell(y).principal, k.add_free("o"), A);
    CHECK(semantics(k.build()) == M({"i1", "i2"}, {"o"}, {{1}, {1}}));
}

TEST_CASE("reduction and path semantics agree") {
    Rng g(22);
    for (int k = 0; k < 200; ++k) {
        Net n = random_routing_net(g, 25);
        REQUIRE(is_routing_net(n));
        Multirelation p = path_semantics(n);
        CHECK(semantics(n) == p);
        CHECK(p == from_entries(input_labels(n), output_labels(n), oracle::path_matrix(n)));
        for (const auto& r : find_redexes(n, Policy::All)) {
            Net m = apply(n, r).summands.at(0);
            CHECK(semantics(m) == p);
        }
    }
}

TEST_CASE("juxtaposition is the coproduct") {
    Multirelation r = M({"a"}, {"x", "y"}, {{1, 2}});
    Multirelation s = M({"b", "c"}, {"z"}, {{0}, {3}});
    Net j = juxtapose(build_area(r), build_area(s));
    CHECK(semantics(j) == coproduct(r, s));
    CHECK(path_semantics(j) == coproduct(r, s));
    Multirelation e(LabelSet{}, LabelSet{});
    CHECK(semantics(juxtapose(build_area(e), build_area(s))) == coproduct(e, s));
}

TEST_CASE("trace reference values") {
    Net t = trace_net(build_area(comm(3)), "1", "1");
    CHECK(semantics(t) == M({"2", "3"}, {"2", "3"}, {{1, 2}, {2, 1}}));

    Net z = trace_net(build_area(M({"i"}, {"o"}, {{0}})), "i", "o");
    CHECK(z.cells.empty());
    CHECK(z.free.empty());

    CHECK(kind_of([] { trace_net(build_area(comm(3)), "1", "2"); }) == ErrorKind::CycleRisk);

    Multirelation r = M({"a"}, {"x"}, {{2}});
    Multirelation s = M({"b"}, {"y"}, {{3}});
    Net j = trace_net(juxtapose(build_area(r), build_area(s)), "R.b", "L.x");
    CHECK(semantics(j) == M({"L.a"}, {"R.y"}, {{6}}));
}

TEST_CASE("trace matches the formula and the walk oracle") {
    Rng g(23);
    int done = 0;
    while (done < 200) {
        Multirelation r = random_area(g, 4, 4, 3);
        const auto& in = r.domain()[uniform(g, r.rows())];
        const auto& out = r.codomain()[uniform(g, r.cols())];
        if (r(in, out) != 0) continue;
        ++done;
        Multirelation got = semantics(trace_net(build_area(r), in, out));
        Multirelation want = trace_formula(r, in, out);
        CHECK(got == want);
        CHECK(oracle::entries(got) == oracle::walk_trace(r, in, out));
    }
}

TEST_CASE("composition") {
    Rng g(24);
    LabelSet mid = {"m1", "m2", "m3"};
    for (int k = 0; k < 100; ++k) {
        Multirelation r(LabelSet{"a1", "a2", "a3"}, mid), s(mid, LabelSet{"z1", "z2", "z3"});
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                r.set(i, j, uniform(g, 4));
                s.set(i, j, uniform(g, 4));
            }
        Net c = compose_areas(build_area(r), mid, build_area(s), mid);
        std::map<std::string, std::string> in, out;
        for (const auto& x : r.domain()) in["L." + x] = x;
        for (const auto& x : s.codomain()) out["R." + x] = x;
        CHECK(relabel(semantics(c), in, out) == compose(r, s));
    }
    Multirelation r = M({"a"}, {"x", "y"}, {{1, 2}});
    Net id = build_area(Multirelation::identity({"x", "y"}));
    Net c = compose_areas(build_area(r), {"x", "y"}, id, {"x", "y"});
    CHECK(semantics(c) == M({"L.a"}, {"R.x", "R.y"}, {{1, 2}}));
    CHECK(kind_of([&] { compose_areas(id, {"x"}, id, {}); }) == ErrorKind::DomainMismatch);
}

TEST_CASE("transit reference values") {
    Net a = build_area(M({"i"}, {"o1", "o2", "o3"}, {{2, 0, 1}}));
    TransitResult t = transit(a, "i");
    CHECK(t.copies == std::map<std::string, Count>{{"o1", 2}, {"o2", 0}, {"o3", 1}});
    CHECK(canonical_equal(t.residual, a));

    Net z = build_area(M({"i"}, {"o"}, {{0}}));
    t = transit(z, "i");
    CHECK(t.copies == std::map<std::string, Count>{{"o", 0}});
    CHECK(canonical_equal(t.residual, z));

    Net c3 = gamma();
    t = transit(c3, "1");
    CHECK(t.copies == std::map<std::string, Count>{{"1", 0}, {"2", 1}, {"3", 1}});
    CHECK(canonical_equal(t.residual, c3));
}

TEST_CASE("transit follows the semantics row") {
    Rng g(25);
    for (int k = 0; k < 50; ++k) {
        Multirelation r = random_area(g, 4, 4, 3);
        Net a = build_area(r);
        const auto& in = r.domain()[uniform(g, r.rows())];
        TransitResult t = transit(a, in);
        for (const auto& o : r.codomain()) CHECK(t.copies.at(o) == r(in, o));
        CHECK(canonical_equal(t.residual, a));
    }
}

TEST_CASE("gamma and delta") {
    CHECK(semantics(gamma()) == comm(3));
    Multirelation d = semantics(delta());
    CHECK(d("3", "1") == 0);
    CHECK(d("3", "2") == 0);
    CHECK(d("1", "3") == 1);
    CHECK(d("3", "4") == 1);
    CHECK(d("2", "2") == 0);
}
