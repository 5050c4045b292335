#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dispersive/cli.hpp"

namespace {

using dispersive::Command;
using dispersive::RunConfig;

void add_common(CLI::App& sub, RunConfig& c, bool needs_spec) {
    auto* spec = sub.add_option("--spec", c.spec_path, "problem spec JSON");
    if (needs_spec) spec->required()->check(CLI::ExistingFile);
    sub.add_option("--n", c.grid_n, "grid nodes (at most 4001)");
    sub.add_option("--p", c.accuracy_p, "accuracy order, 2 or 4")->capture_default_str();
    sub.add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub.add_option("--out", c.out_dir, "output directory")->capture_default_str();
    sub.add_option("--tol-l2", c.tol_l2, "relative slack on the L2 estimate");
    sub.add_option("--tol-trace", c.tol_trace, "relative slack on the trace estimate");
    sub.add_option("--max-l", c.max_l, "largest accepted order l")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Admissibility checks, solver and estimate verification for odd-order dispersive boundary value problems"};
    app.require_subcommand(1);
    RunConfig c;
    std::map<CLI::App*, Command> commands;

    auto* check = app.add_subcommand("check", "print the admissibility margins of a spec");
    add_common(*check, c, true);
    commands[check] = Command::Check;

    auto* solve = app.add_subcommand("solve", "solve the spec on a uniform grid");
    add_common(*solve, c, true);
    commands[solve] = Command::Solve;

    auto* lemmas = app.add_subcommand("verify-lemmas", "check the integration-by-parts identities on random polynomials");
    add_common(*lemmas, c, false);
    lemmas->add_option("--cases", c.cases, "polynomials per identity, order and length (default 200)");
    commands[lemmas] = Command::VerifyLemmas;

    auto* mms = app.add_subcommand("mms", "convergence study on nested grids");
    add_common(*mms, c, true);
    const std::map<std::string, dispersive::MmsMode> modes{{"manufactured", dispersive::MmsMode::Manufactured},
                                                           {"self", dispersive::MmsMode::Self}};
    mms->add_option("--mode", c.mms_mode, "manufactured or self")->transform(CLI::CheckedTransformer(modes));
    mms->add_option("--degree", c.mms_degree, "degree of the manufactured polynomial (default 2l+p+6)");
    mms->add_option("--levels", c.mms_levels, "number of nested grids")->capture_default_str();
    mms->add_option("--reference-n", c.reference_n, "reference grid for self-convergence")->capture_default_str();
    commands[mms] = Command::Mms;

    auto* est = app.add_subcommand("estimates", "check the L2 and trace estimates on the spec");
    add_common(*est, c, true);
    commands[est] = Command::Estimates;

    auto* sweep = app.add_subcommand("sweep", "estimate sweep over random admissible cases");
    add_common(*sweep, c, false);
    sweep->add_option("--l", c.sweep_l, "orders to sweep, e.g. --l 2,3,4")->delimiter(',')->capture_default_str();
    sweep->add_option("--cases", c.cases, "cases per order (default 100)");
    commands[sweep] = Command::Sweep;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << nlohmann::json{{"error", {{"kind", "InvalidArgument"}, {"message", e.what()}}},
                                    {"exit_code", dispersive::exit_code::failure}}
                         .dump()
                  << "\n";
        return dispersive::exit_code::failure;
    }
    for (const auto& [sub, command] : commands)
        if (sub->parsed()) c.command = command;
    return dispersive::run(c, std::cout, std::cerr);
}
