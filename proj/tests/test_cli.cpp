// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "routenet/lang/term.hpp"
#include "routenet/net_io.hpp"
#include "routenet/rewrite.hpp"
#include "routenet/translate.hpp"

using namespace routenet;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args, const std::string& stdin_text = "") {
    args.insert(args.begin(), "routenet");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
    return {code, out.str(), err.str()};
}

std::string file(const std::string& name, const std::string& content) {
    fs::path dir = fs::temp_directory_path() / "routenet_cli_test";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream(p) << content;
    return p.string();
}

}  // namespace

TEST_CASE("compile emits the boxed One") {
    Result r = run({"compile", file("unit.term", "*\n")});
    CHECK(r.code == 0);
    CHECK(r.out == serialize(compile({}, lang::parse_term("*"))) + "\n");
    Result d = run({"compile", "--emit", "dot", "-"}, "*");
    CHECK(d.code == 0);
    CHECK(d.out.find("graph") != std::string::npos);
}

TEST_CASE("area of the 3-communication matrix") {
    Result r = run({"area", file("comm3.mat", "in: 1 2 3\nout: 1 2 3\n0 1 1\n1 0 1\n1 1 0\n")});
    REQUIRE(r.code == 0);
    NetSum s = parse_net_sum(r.out, true);
    REQUIRE(s.summands.size() == 1);
    CHECK(s.summands[0].free.size() == 6);
    CHECK(run({"area", "--payload", "(1*1)", file("one.mat", "in: a\nout: b\n1\n")}).code == 0);
    CHECK(run({"area", "--payload", "(1*", file("one.mat", "in: a\nout: b\n1\n")}).code == cli::kExitUsage);
}

TEST_CASE("check, values and reduce") {
    std::string ctx = file("r.ctx", "r : Unit -> Unit\n");
    std::string prog = file("choice.term", "get r || r <= (\\x. x) || r <= (\\x. *)\n");
    Result c = run({"check", ctx, prog});
    CHECK(c.code == 0);
    CHECK(c.out == "B ! {r}\n");
    Result v = run({"values", ctx, prog});
    CHECK(v.code == 0);
    CHECK(v.out == "[\\x. *]\n[\\x. x]\n");

    Result net = run({"compile", ctx, prog});
    REQUIRE(net.code == 0);
    Result red = run({"reduce", file("choice.json", net.out)});
    REQUIRE(red.code == 0);
    NetSum nf = parse_net_sum(red.out);
    CHECK(nf.summands.size() == 2);
    CHECK(red.out == serialize(normalize(parse_net_sum(net.out, true))) + "\n");
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"compile", "--emit", "svg", "-"}, "*").code == cli::kExitUsage);
    CHECK(run({"verify", "--suite", "nope"}).code == cli::kExitUsage);
    CHECK(run({"check", "-"}, "(* ").code == cli::kExitParse);
    CHECK(run({"reduce", "-"}, "{\"sum\": [").code == cli::kExitParse);
    CHECK(run({"area", "-"}, "in: a\nout: b\nx\n").code == cli::kExitParse);
    Result t = run({"check", "-"}, "get q");
    CHECK(t.code == cli::kExitCheck);
    CHECK(t.err.find("(get)") != std::string::npos);
    CHECK(run({"check", "/nonexistent/x.term"}).code == cli::kExitNoInput);
    std::string prog = file("choice2.term", "get r || r <= (\\x. x) || r <= (\\x. *)\n");
    std::string ctx = file("r2.ctx", "r : Unit -> Unit\n");
    CHECK(run({"--budget", "2", "values", ctx, prog}).code == cli::kExitBudget);
    Result net = run({"compile", ctx, prog});
    CHECK(run({"--budget", "3", "reduce", "-"}, net.out).code == cli::kExitBudget);
}

TEST_CASE("the budget can come from the environment") {
    std::string ctx = file("r3.ctx", "r : Unit -> Unit\n");
    std::string net = run({"compile", ctx, file("choice3.term", "get r || r <= (\\x. x) || r <= (\\x. *)")}).out;
    ::setenv("ROUTENET_BUDGET", "3", 1);
    int with_env = run({"reduce", "-"}, net).code;
    int flag_wins = run({"--budget", "10000", "reduce", "-"}, net).code;
    ::unsetenv("ROUTENET_BUDGET");
    CHECK(with_env == cli::kExitBudget);
    CHECK(flag_wins == 0);
    CHECK(run({"reduce", "-"}, net).code == 0);
}

TEST_CASE("verify reports are deterministic") {
    Result a = run({"verify", "--suite", "trace", "--cases", "200", "--seed", "7"});
    CHECK(a.code == 0);
    CHECK(a.out == "trace: 200/200 pass (seed 7)\n");
    Result b = run({"verify", "--suite", "trace", "--cases", "200", "--seed", "7"});
    CHECK(a.out == b.out);
    for (const char* s : {"compose", "paths", "simulate", "adequacy"}) {
        Result r = run({"verify", "--suite", s, "--cases", "20", "--seed", "1"});
        INFO(r.out);
        CHECK(r.code == 0);
        CHECK(r.out.find("20/20 pass (seed 1)") != std::string::npos);
    }
}
