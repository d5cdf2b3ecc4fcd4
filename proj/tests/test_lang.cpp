// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <functional>

#include "routenet/errors.hpp"
#include "routenet/lang/eval.hpp"
#include "routenet/lang/generate.hpp"
#include "routenet/lang/term.hpp"
#include "routenet/lang/types.hpp"

using namespace routenet;
using namespace routenet::lang;

namespace {

TermPtr T(const char* s) { return parse_term(s); }
TypePtr Ty(const char* s) { return parse_type(s); }

std::string type_error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Type) return e.what();
        return std::string("other: ") + e.what();
    }
    return "none";
}

const char* kProjRegions =
    "r : (Unit -> Unit) -> (Unit -> Unit) -> Unit -> Unit\n"
    "s : (Unit -> Unit) -> (Unit -> Unit) -> Unit -> Unit\n";
const char* kProj =
    "(\\x. x (\\z. z) (\\z. *)) (get r) || (\\y. set r y) (get s)"
    " || set s (\\a. \\b. a) || set s (\\a. \\b. b)";

std::vector<std::string> keys(const std::vector<Outcome>& os) {
    std::vector<std::string> k;
    for (const auto& o : os) k.push_back(o.key);
    return k;
}

TermPtr reassociate(const TermPtr& p) {
    auto ts = threads(p);
    TermPtr out;
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) out = out ? par(*it, out) : *it;
    return out;
}

}  // namespace

TEST_CASE("term syntax round trip") {
    for (const char* s : {"*", "x", "\\x. x", "(\\x. x) *", "f x y", "f (x y)", "get r", "set r (\\x. x)",
                          "a || b || c", "a || (b || c)", "r <= *", "\\x. x || y", "(\\x. x) || y",
                          "[x := *, y := \\z. z] (x y)", "lam<r := *, \\a. a; s := *> (f x)", "down<r := *> get r",
                          "up<s := *> set s *", "a + b"}) {
        TermPtr t = T(s);
        INFO(s << " printed as " << print(*t));
        CHECK(alpha_key(*T(print(*t).c_str())) == alpha_key(*t));
    }
    CHECK(print(*T("a || (b || c)")) == "a || (b || c)");
    CHECK(print(*T("(a || b) || c")) == "a || b || c");
    CHECK_THROWS_AS(T("\\x x"), ParseError);
    CHECK_THROWS_AS(T("set r (get s)"), ParseError);
    CHECK_THROWS_AS(T("lam<r := *> get r"), ParseError);
    try {
        T("(* *");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("substitution avoids capture") {
    TermPtr m = T("\\y. x y");
    TermPtr r = substitute(m, "x", T("y"));
    CHECK(free_vars(*r) == std::set<std::string>{"y"});
    CHECK(alpha_key(*r) == alpha_key(*T("\\z. y z")));
    CHECK(alpha_key(*T("\\a. a")) == alpha_key(*T("\\b. b")));
    CHECK(alpha_key(*T("\\a. c")) != alpha_key(*T("\\b. d")));
}

TEST_CASE("type syntax") {
    CHECK(print(*Ty("Unit -{s,r}> Unit -> Unit")) == "Unit -{r,s}> Unit -> Unit");
    CHECK(print(*Ty("(Unit -> Unit) -> Unit")) == "(Unit -> Unit) -> Unit");
    CHECK(print(*Ty("Reg r Unit")) == "Reg r Unit");
    CHECK(type_equal(*Ty("Unit -{}> Unit"), *Ty("Unit -> Unit")));
    CHECK_THROWS_AS(Ty("Unit ->"), ParseError);
    CHECK_THROWS_AS(Ty("Int"), ParseError);
    RegionCtx r = parse_region_ctx("# refs\nr : Unit\n\ns : Unit -{r}> Unit\n");
    REQUIRE(r.entries.size() == 2);
    CHECK(type_equal(*r.find("s"), *Ty("Unit -{r}> Unit")));
    CHECK_THROWS_AS(parse_region_ctx("r Unit"), ParseError);
    CHECK_THROWS_AS(parse_region_ctx("r : Unit\nr : Unit"), ParseError);
}

TEST_CASE("stratification") {
    CHECK(check_stratified(parse_region_ctx("r : Unit")).ok);
    CHECK_FALSE(check_stratified(parse_region_ctx("r : Unit -{r}> Unit")).ok);
    auto s = check_stratified(parse_region_ctx("r2 : Unit -{r1}> Unit\nr1 : Unit"));
    REQUIRE(s.ok);
    CHECK(s.order == std::vector<std::string>{"r1", "r2"});
    CHECK_FALSE(check_stratified(parse_region_ctx("a : Unit -{b}> Unit\nb : Unit -{a}> Unit")).ok);
    CHECK_FALSE(check_stratified(parse_region_ctx("a : Unit -{zz}> Unit")).ok);
}

TEST_CASE("source typing rules") {
    RegionCtx R = parse_region_ctx("r : Unit -> Unit\ns : Unit\n");
    auto d = typecheck_amadio(R, {}, T("get r"));
    CHECK(print(*d.result.type) == "Unit -> Unit");
    CHECK(d.result.effect == Effect{"r"});

    d = typecheck_amadio(R, {}, T("set r (\\x. x)"));
    CHECK(print(*d.result.type) == "Unit");
    CHECK(d.result.effect == Effect{"r"});

    d = typecheck_amadio(R, {}, T("\\x. get s"));
    CHECK(print(*d.result.type) == "Unit -{s}> Unit");
    CHECK(d.result.effect.empty());

    d = typecheck_amadio(R, {}, T("get s || set r (\\y. y)"));
    CHECK(d.result.type->kind == TypeKind::Behavior);
    CHECK(d.result.effect == Effect{"r", "s"});

    d = typecheck_amadio(R, {}, T("s <= *"));
    CHECK(d.result.type->kind == TypeKind::Behavior);
    CHECK(d.result.effect.empty());

    d = typecheck_amadio(R, {{"f", Ty("Unit -{s}> Unit")}}, T("f *"));
    CHECK(d.result.effect == Effect{"s"});

    CHECK(d.at(*d.term).effect == Effect{"s"});
    CHECK_THROWS_AS(d.at(*T("*")), Error);
}

TEST_CASE("source typing errors name the rule") {
    RegionCtx R = parse_region_ctx("r : Unit -> Unit\ns : Unit\n");
    CHECK_THAT(type_error_of([&] { typecheck_amadio(R, {}, T("y")); }), Catch::Matchers::StartsWith("(var)"));
    CHECK_THAT(type_error_of([&] { typecheck_amadio(R, {}, T("* *")); }), Catch::Matchers::StartsWith("(app)"));
    CHECK_THAT(type_error_of([&] { typecheck_amadio(R, {}, T("get q")); }), Catch::Matchers::StartsWith("(get)"));
    CHECK_THAT(type_error_of([&] { typecheck_amadio(R, {}, T("set s (\\x. x)")); }), Catch::Matchers::StartsWith("(set)"));
    CHECK_THAT(type_error_of([&] { typecheck_amadio(R, {}, T("r <= *")); }), Catch::Matchers::StartsWith("(store)"));
    // a reader stored under r whose declared latent effect is empty
    CHECK_THAT(type_error_of([&] { typecheck_amadio(R, {}, T("set r (\\x. get s)")); }), Catch::Matchers::StartsWith("(sub)"));
    CHECK_THAT(type_error_of([&] { typecheck_amadio(R, {}, T("\\x. x x")); }), Catch::Matchers::StartsWith("(app)"));
    CHECK_THAT(type_error_of([&] { typecheck_amadio(R, {}, T("(\\x. *) (* || *)")); }), Catch::Matchers::StartsWith("(lam)"));
    CHECK_THAT(type_error_of([&] { typecheck_amadio(R, {}, T("[x := *] x")); }), Catch::Matchers::StartsWith("(syntax)"));
    try {
        typecheck_amadio(parse_region_ctx("r : Unit -{r}> Unit"), {}, T("*"));
        FAIL("expected NotStratified");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotStratified);
    }
}

TEST_CASE("effect widening") {
    CHECK(subtype(*Ty("Unit"), {}, *Ty("Unit"), {"r"}));
    CHECK_FALSE(subtype(*Ty("Unit"), {"r"}, *Ty("Unit"), {}));
    CHECK(subtype(*Ty("Unit -> Unit"), {}, *Ty("Unit -{r}> Unit"), {}));
    CHECK_FALSE(subtype(*Ty("Unit -{r}> Unit"), {}, *Ty("Unit -> Unit"), {}));
    CHECK_FALSE(subtype(*Ty("(Unit -{r}> Unit) -> Unit"), {}, *Ty("(Unit -> Unit) -> Unit"), {}));
    // a pure function stored where a reader is expected
    RegionCtx R = parse_region_ctx("s : Unit\nr : Unit -{s}> Unit\n");
    CHECK_NOTHROW(typecheck_amadio(R, {}, T("set r (\\x. x)")));
    auto d = typecheck_amadio(R, {}, T("\\x. x"), Ty("Unit -{s}> Unit"));
    CHECK(print(*d.result.type) == "Unit -{s}> Unit");
}

TEST_CASE("intermediate typing rules") {
    RegionCtx R = parse_region_ctx("r : Unit\n");
    auto d = typecheck_lthis(R, {}, T("[x := *] x"));
    CHECK(print(*d.result.type) == "Unit");
    d = typecheck_lthis(R, {}, T("get r || *"));
    CHECK(d.result.type->kind == TypeKind::Behavior);
    CHECK(d.result.effect == Effect{"r"});
    d = typecheck_lthis(R, {}, T("get r + *"));
    CHECK(print(*d.result.type) == "Unit");
    CHECK(d.result.effect == Effect{"r"});
    d = typecheck_lthis(R, {}, T("down<r := *> get r"));
    CHECK(d.relaxations.empty());
    d = typecheck_lthis(R, {}, T("lam<r := *> ((\\x. x) *)"));
    REQUIRE(d.relaxations.size() == 1);
    CHECK_THAT(d.relaxations[0], Catch::Matchers::StartsWith("(subst-r)"));
    CHECK_THAT(type_error_of([&] { typecheck_lthis(R, {}, T("down<q := *> get r")); }),
               Catch::Matchers::StartsWith("(subst-r)"));
    CHECK_THAT(type_error_of([&] { typecheck_lthis(R, {}, T("down<r := \\x. x> get r")); }),
               Catch::Matchers::StartsWith("(subst-r)"));
}

TEST_CASE("single steps") {
    auto s = steps(T("(\\x. x) *"));
    REQUIRE(s.size() == 1);
    CHECK(s[0].rule == StepRule::Beta);
    CHECK(alpha_key(*s[0].result) == alpha_key(*T("*")));

    s = steps(T("(\\x. x) (set r *)"));
    REQUIRE(s.size() == 1);
    CHECK(s[0].rule == StepRule::Set);
    CHECK(program_key(*s[0].result) == program_key(*T("(\\x. x) * || r <= *")));

    s = steps(T("get r || r <= * || r <= \\x. x"));
    REQUIRE(s.size() == 2);
    CHECK(s[0].rule == StepRule::Get);
    CHECK(s[1].rule == StepRule::Get);

    CHECK(steps(T("get r")).empty());
    CHECK(steps(T("\\x. (\\y. y) x")).empty());
    CHECK(steps(T("r <= (\\x. x)")).empty());
    // both sides of an application are evaluation positions
    CHECK(steps(T("(get r) ((\\x. x) *) || r <= \\y. y")).size() == 2);
    CHECK(step(T("(\\x. x) * || (\\x. x) *")).size() == 1);
}

TEST_CASE("program keys follow the parallel congruence") {
    CHECK(program_key(*T("a || (b || c)")) == program_key(*T("(c || a) || b")));
    CHECK(program_key(*T("a || a")) != program_key(*T("a")));
    CHECK(alpha_key(*strip_stores(T("r <= * || a || (s <= * || b)"))) == alpha_key(*T("a || b")));
    CHECK(store_of(T("r <= * || a || r <= \\x. x")).at("r").size() == 2);
}

TEST_CASE("values reference cases") {
    auto v = values(T("*"));
    REQUIRE(v.size() == 1);
    CHECK(v[0].values.size() == 1);

    v = values(T("get r || r <= *"));
    REQUIRE(v.size() == 1);
    CHECK(v[0].key == alpha_key(*T("*")));

    CHECK(values(T("get r")).empty());
    CHECK(values(T("get r || r <= * || r <= \\x. x")).size() == 2);

    auto p = values(T(kProj));
    REQUIRE(p.size() == 2);
    std::set<std::string> firsts;
    for (const auto& o : p) {
        REQUIRE(o.values.size() == 4);
        CHECK(std::count_if(o.values.begin(), o.values.end(), [](const TermPtr& t) { return t->kind == TermKind::Star; }) == 3);
        firsts.insert(alpha_key(*o.values[0]));
        CHECK(alpha_key(*o.representative) == alpha_key(*T(print(*o.representative).c_str())));
    }
    CHECK(firsts == std::set<std::string>{alpha_key(*T("\\z. z")), alpha_key(*T("\\z. *"))});
    CHECK_NOTHROW(typecheck_amadio(parse_region_ctx(kProjRegions), {}, T(kProj)));

    try {
        values(T(kProj), 5);
        FAIL("expected budget exhaustion");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BudgetExhausted);
    }
}

TEST_CASE("embedding reference cases") {
    RefValues vs{{"r", {T("*")}}};
    TermPtr id = T("\\x. x");
    CHECK(embed_lthis(id, vs) == id);
    CHECK(print(*embed_lthis(T("set r *"), vs)) == "set r *");
    CHECK(print(*embed_lthis(T("get s"), vs)) == print(*T("down<r := *> get s")));
    CHECK(print(*embed_lthis(T("f x"), vs)) == print(*T("lam<r := *> (f x)")));
    CHECK(print(*embed_lthis(T("f x || get r"), {})) == "f x || get r");
    CHECK(print(*embed_program(T("get r || r <= *"))) == print(*T("down<r := *> get r")));
    CHECK_THROWS_AS(embed_program(T("r <= *")), Error);
}

TEST_CASE("random programs: typing, reduction and embedding") {
    Rng g(21);
    int nontrivial = 0;
    for (int k = 0; k < 150; ++k) {
        RandomProgram rp = random_program(g, 4, 2);
        INFO("program " << print(*rp.program));
        REQUIRE(check_stratified(rp.regions).ok);
        Derivation d = typecheck_amadio(rp.regions, {}, rp.program);
        REQUIRE(free_vars(*rp.program).empty());

        // subject reduction, thread by thread
        TermPtr skel = strip_stores(rp.program);
        auto before = threads(skel);
        for (const auto& s : steps(rp.program)) {
            ++nontrivial;
            CHECK(free_vars(*s.result).empty());
            Derivation e = typecheck_amadio(rp.regions, {}, s.result);
            auto after = threads(strip_stores(s.result));
            REQUIRE(after.size() == before.size());
            for (std::size_t t = 0; t < after.size(); ++t) {
                const Judgement& jb = d.at(*before[t]);
                const Judgement& ja = e.at(*after[t]);
                CHECK(subtype(*ja.type, ja.effect, *jb.type, jb.effect));
            }
        }

        // reassociation does not change the outcomes
        auto v1 = values(rp.program, 20000);
        auto v2 = values(reassociate(rp.program), 20000);
        CHECK(keys(v1) == keys(v2));

        // the embedding re-typechecks at the same type
        TermPtr em = embed_program(rp.program);
        Derivation de = typecheck_lthis(rp.regions, {}, em, d.at(*skel).type);
        CHECK(subtype(*de.result.type, de.result.effect, *d.at(*skel).type, d.at(*skel).effect));
    }
    CHECK(nontrivial > 100);
}
