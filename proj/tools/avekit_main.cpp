#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "avekit/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"avekit: absolute value equation solvers via dynamical systems"};
    app.require_subcommand(1);

    std::string config_path, out_dir, convention = "table";
    std::uint64_t seed = 0;
    bool out_given = false, seed_given = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides [output] dir)");
        cmd->add_option("--seed", seed, "seed override for the problem generator");
        cmd->add_option("--convention", convention, "mu convention: table or lemma")
            ->check(CLI::IsMember({"table", "lemma"}));
        return cmd;
    };

    auto* solve = add_common(app.add_subcommand(
        "solve", "integrate one model and write the trajectory"));
    auto* tmax = add_common(app.add_subcommand(
        "tmax", "settling-time bound table over a parameter sweep"));
    auto* compare = add_common(app.add_subcommand(
        "compare", "run several models on one problem and collect energy curves"));
    auto* verify = add_common(app.add_subcommand(
        "verify", "check contraction, error-bound and equilibrium properties"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : avekit::kExitConfig;
    }

    out_given = app.get_subcommands().front()->count("--out") > 0;
    seed_given = app.get_subcommands().front()->count("--seed") > 0;

    avekit::CliOptions cli;
    cli.config_path = config_path;
    if (out_given) cli.out_dir = out_dir;
    if (seed_given) cli.seed = seed;
    cli.convention = avekit::mu_convention_from_string(convention);

    if (solve->parsed()) return avekit::run_solve(cli);
    if (tmax->parsed()) return avekit::run_tmax(cli);
    if (compare->parsed()) return avekit::run_compare(cli);
    if (verify->parsed()) return avekit::run_verify(cli);
    return avekit::kExitConfig;
}
