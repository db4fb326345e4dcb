#include <CLI11.hpp>

#include "dwig/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Induction generator simulation and adaptive voltage control"};
    app.require_subcommand(1);
    app.set_version_flag("--version", dwig::tool_version());
    // --h is taken by the integration-step override below.
    app.set_help_flag("--help", "print help and exit");

    dwig::RunOptions run;
    std::uint64_t seed_override = 0;
    double ts_override = 0.0, h_override = 0.0;

    auto add_run_options = [&](CLI::App* cmd) {
        cmd->set_help_flag("--help", "print help and exit");
        cmd->add_option("--scenario", run.scenario_path, "scenario config file")
            ->required();
        cmd->add_option("--out", run.out_dir, "output directory")->required();
        cmd->add_option("--seed", seed_override, "override the scenario seed");
        cmd->add_option("--ts", ts_override, "override the controller period [s]");
        cmd->add_option("--h", h_override, "override the integration step [s]");
    };

    CLI::App* open_cmd = app.add_subcommand("open-loop", "run a plant-only scenario");
    add_run_options(open_cmd);
    CLI::App* closed_cmd =
        app.add_subcommand("closed-loop", "run the adaptive control loop");
    add_run_options(closed_cmd);

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run a (lambda, rho) tuning sweep");
    add_run_options(sweep_cmd);
    std::vector<double> lambdas, rhos;
    sweep_cmd->add_option("--lambda", lambdas, "forgetting factor grid");
    sweep_cmd->add_option("--rho", rhos, "control penalty grid");

    dwig::IdentifyOptions ident;
    CLI::App* ident_cmd =
        app.add_subcommand("identify", "fit a discrete model to a logged run");
    ident_cmd->set_help_flag("--help", "print help and exit");
    ident_cmd->add_option("--log", ident.log_path, "csv with u and y columns")
        ->required();
    ident_cmd->add_option("--order", ident.order, "model order (2..8)");
    ident_cmd->add_option("--lambda", ident.lambda, "forgetting factor");
    ident_cmd->add_option("--p0", ident.p0, "initial covariance scale");
    ident_cmd->add_option("--out", ident.out_dir, "also write the report here");

    CLI11_PARSE(app, argc, argv);

    auto fill_overrides = [&](CLI::App* cmd) {
        if (cmd->count("--seed")) run.seed = seed_override;
        if (cmd->count("--ts")) run.ts = ts_override;
        if (cmd->count("--h")) run.h = h_override;
    };

    if (open_cmd->parsed()) {
        fill_overrides(open_cmd);
        return dwig::cmd_open_loop(run);
    }
    if (closed_cmd->parsed()) {
        fill_overrides(closed_cmd);
        return dwig::cmd_closed_loop(run);
    }
    if (sweep_cmd->parsed()) {
        fill_overrides(sweep_cmd);
        return dwig::cmd_sweep(run, lambdas, rhos);
    }
    if (ident_cmd->parsed()) {
        return dwig::cmd_identify(ident);
    }
    return dwig::kExitInternal;
}
