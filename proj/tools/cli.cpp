// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "routenet/errors.hpp"
#include "routenet/lang/eval.hpp"
#include "routenet/lang/types.hpp"
#include "routenet/net_io.hpp"
#include "routenet/rewrite.hpp"
#include "routenet/routing.hpp"
#include "routenet/translate.hpp"
#include "routenet/verify.hpp"

namespace routenet::cli {

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path, std::istream& in) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

std::size_t default_budget() {
    const char* env = std::getenv("ROUTENET_BUDGET");
    if (!env || !*env) return kDefaultBudget;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) return kDefaultBudget;
    return static_cast<std::size_t>(v);
}

/** One or two paths: [regions] term. */
std::pair<lang::RegionCtx, lang::TermPtr> load_program(const std::vector<std::string>& files, std::istream& in) {
    lang::RegionCtx r;
    if (files.size() == 2) r = lang::parse_region_ctx(slurp(files[0], in));
    return {r, lang::parse_term(slurp(files.back(), in))};
}

void emit(std::ostream& out, const std::string& format, const NetSum& s, bool single) {
    if (format == "dot") {
        out << (single ? to_dot(s.summands.at(0)) : to_dot(s));
    } else {
        out << (single ? serialize(s.summands.at(0)) : serialize(s)) << '\n';
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Routing areas, differential proof nets and a compiler for a concurrent lambda-calculus", "routenet"};
    app.require_subcommand(1);
    std::size_t budget = default_budget();
    app.add_option("--budget", budget, "Rewrite steps (per summand) or explored states allowed")
        ->check(CLI::PositiveNumber);

    std::vector<std::string> files;
    std::string format = "json";
    auto add_emit = [&](CLI::App* c) {
        c->add_option("--emit", format, "Output format")->check(CLI::IsMember({"json", "dot"}));
    };

    auto* check = app.add_subcommand("check", "Type and effect of a program");
    check->add_option("files", files, "[regions.ctx] program.term")->required()->expected(1, 2);

    auto* compile_cmd = app.add_subcommand("compile", "Closed net of a program");
    compile_cmd->add_option("files", files, "[regions.ctx] program.term")->required()->expected(1, 2);
    add_emit(compile_cmd);

    std::string net_file;
    auto* reduce = app.add_subcommand("reduce", "Normal form of a net or net sum");
    reduce->add_option("net", net_file, "net.json")->required();
    add_emit(reduce);

    auto* values_cmd = app.add_subcommand("values", "Reachable value multisets of a program");
    values_cmd->add_option("files", files, "[regions.ctx] program.term")->required()->expected(1, 2);

    std::string matrix_file, payload = "!1";
    auto* area = app.add_subcommand("area", "Routing area of a matrix");
    area->add_option("matrix", matrix_file, "relation.mat")->required();
    area->add_option("--payload", payload, "Formula A of the !A wires (without the !)");
    add_emit(area);

    std::string suite;
    std::uint64_t seed = 0;
    std::size_t cases = 100;
    auto* verify = app.add_subcommand("verify", "Run a seeded property suite");
    verify->add_option("--suite", suite, "Suite name")
        ->required()
        ->check(CLI::IsMember({"trace", "compose", "paths", "simulate", "adequacy"}));
    verify->add_option("--seed", seed, "Seed of case 0");
    verify->add_option("--cases", cases, "Number of cases");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*check) {
            auto [r, p] = load_program(files, in);
            lang::Derivation d = lang::typecheck_amadio(r, {}, p);
            out << lang::print(*d.result.type) << " ! " << lang::print(d.result.effect) << '\n';
        } else if (*compile_cmd) {
            auto [r, p] = load_program(files, in);
            lang::typecheck_amadio(r, {}, p);
            emit(out, format, NetSum(compile(r, p)), true);
        } else if (*reduce) {
            NetSum s = parse_net_sum(slurp(net_file, in), true);
            for (const auto& n : s.summands) {
                auto v = validate(n);
                if (!v.empty()) {
                    err << "routenet: invalid net\n" << format_violations(v);
                    return kExitCheck;
                }
            }
            NormalizeOptions opt;
            opt.budget = budget;
            emit(out, format, normalize(s, opt), false);
        } else if (*values_cmd) {
            auto [r, p] = load_program(files, in);
            lang::typecheck_amadio(r, {}, p);
            std::vector<std::string> lines;
            for (const auto& o : lang::values(p, budget)) {
                std::vector<std::string> vs;
                for (const auto& v : o.values) vs.push_back(lang::print(*v));
                std::sort(vs.begin(), vs.end());
                std::string line = "[";
                for (std::size_t k = 0; k < vs.size(); ++k) line += (k ? ", " : "") + vs[k];
                lines.push_back(line + "]");
            }
            std::sort(lines.begin(), lines.end());
            for (const auto& l : lines) out << l << '\n';
        } else if (*area) {
            Multirelation m = parse_matrix(slurp(matrix_file, in));
            Formula a;
            try {
                a = Formula::parse(payload);
            } catch (const ParseError& e) {
                err << "routenet: --payload: " << e.what() << '\n';
                return kExitUsage;
            }
            emit(out, format, NetSum(build_area(RoutingArea{m, Formula::bang(a)})), true);
        } else if (*verify) {
            SuiteReport rep = run_suite(suite, seed, cases, budget);
            for (const auto& f : rep.failures) out << f << '\n';
            out << rep.suite << ": " << rep.passed << "/" << rep.cases << " pass (seed " << rep.seed << ")\n";
            return rep.passed == rep.cases ? 0 : kExitVerify;
        }
    } catch (const InputError& e) {
        err << "routenet: " << e.what() << '\n';
        return kExitNoInput;
    } catch (const ParseError& e) {
        err << "routenet: " << e.what() << '\n';
        return kExitParse;
    } catch (const Error& e) {
        err << "routenet: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return e.kind() == ErrorKind::BudgetExhausted ? kExitBudget : kExitCheck;
    }
    return 0;
}

}  // namespace routenet::cli
