#pragma once

#include <array>
#include <iostream>
#include <string>

#include "phyn/cli/commands.hpp"

namespace phyn::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_validation = 2;
inline constexpr int exit_usage = 64;

inline constexpr std::array<const char*, 7> subcommands = {"price", "tree", "pde", "rates", "simulate", "hedge", "quiz"};

inline std::string usage() {
    return "usage: phyn <command> [--spec scenario.json] [--out path] [options]\n"
           "commands:\n"
           "  price     Black-Scholes value and Greeks, optional Monte Carlo check\n"
           "  tree      binomial lattice, European and American\n"
           "  pde       finite-difference solution (ftcs or cn)\n"
           "  rates     discount curve views, swap rate, zero-bond option\n"
           "  simulate  sample paths (brownian, gbm, ou, cir)\n"
           "  hedge     discrete delta-hedging replication error\n"
           "  quiz      closed-form oracles against their verifiers\n"
           "run 'phyn <command> --help' for the options of a command\n";
}

/// Runs one command. Exit codes: 0 success, 1 a verification table failed,
/// 2 invalid input, 64 unknown command.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    if (argc < 2) {
        err << usage();
        return exit_usage;
    }
    const std::string first = argv[1];
    if (first == "--help" || first == "-h") {
        out << usage();
        return exit_ok;
    }
    bool known = false;
    for (const char* s : subcommands) known = known || first == s;
    if (!known) {
        err << "unknown command '" << first << "'\n" << usage();
        return exit_usage;
    }

    CLI::App app{"phyn"};
    app.require_subcommand(1);
    std::string spec, out_path;
    PriceCommand price;
    TreeCommand tree;
    PdeCommand pde;
    RatesCommand rates;
    SimulateCommand sim;
    HedgeCommand hedge;
    QuizCommand quiz;

    std::vector<std::pair<CLI::App*, Binder>> binders;
    auto add = [&](const char* name, const char* desc, auto& cmd) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--spec", spec, "JSON scenario; flags override its keys");
        sub->add_option("--out", out_path, "write the result here instead of stdout");
        binders.emplace_back(sub, Binder(*sub, name));
        cmd.bind(binders.back().second);
    };
    binders.reserve(subcommands.size());
    add("price", "Black-Scholes value and Greeks", price);
    add("tree", "binomial lattice", tree);
    add("pde", "finite-difference solver", pde);
    add("rates", "discount curve tools", rates);
    add("simulate", "sample paths", sim);
    add("hedge", "delta-hedging simulation", hedge);
    add("quiz", "quiz oracles", quiz);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        for (auto& [sub, b] : binders)
            if (sub->parsed()) {
                out << sub->help();
                return exit_ok;
            }
        out << usage();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return exit_validation;
    }

    try {
        for (auto& [sub, b] : binders) {
            if (!sub->parsed()) continue;
            if (!spec.empty()) b.apply(read_json_file(spec));
            const std::string name = sub->get_name();
            std::string text;
            bool ok = true;
            if (name == "price") text = to_text(price.run());
            else if (name == "tree") text = to_text(tree.run());
            else if (name == "pde") text = to_text(pde.run());
            else if (name == "rates") text = to_text(rates.run());
            else if (name == "simulate") text = sim.run();
            else if (name == "hedge") text = to_text(hedge.run());
            else std::tie(text, ok) = quiz.run();
            emit(text, out_path, out);
            return ok ? exit_ok : exit_check_failed;
        }
    } catch (const validation_error& e) {
        err << e.what() << '\n';
        return exit_validation;
    }
    err << usage();
    return exit_usage;
}

} // namespace phyn::cli
