// SPDX-License-Identifier: Apache-2.0
//
// ransim: a discrete-time simulator of an AI-orchestrated disaggregated RAN.
//   ransim run      --config cfg.json --out DIR [--seed N] [--scheduler NAME]
//   ransim sweep    --config cfg.json --out DIR --schedulers A,B --seeds N..M [--jobs K]
//   ransim validate --config cfg.json

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ransim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"AI-orchestrated RAN simulator"};
    app.require_subcommand(1);

    ransim::RunOptions run_opts;
    std::uint64_t run_seed = 0;
    std::string run_scheduler;
    CLI::App* run_cmd = app.add_subcommand("run", "run one scenario");
    run_cmd->add_option("--config", run_opts.config_path, "scenario config (JSON)");
    run_cmd->add_option("--out", run_opts.out_dir, "output directory")->required();
    auto* seed_opt = run_cmd->add_option("--seed", run_seed, "seed override");
    auto* sched_opt =
        run_cmd->add_option("--scheduler", run_scheduler, "scheduler override");

    ransim::SweepOptions sweep_opts;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a scheduler x seed sweep");
    sweep_cmd->add_option("--config", sweep_opts.config_path, "scenario config (JSON)");
    sweep_cmd->add_option("--out", sweep_opts.out_dir, "output directory")->required();
    sweep_cmd->add_option("--schedulers", sweep_opts.schedulers, "comma list of schedulers")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--seeds", sweep_opts.seeds, "seed range N..M or comma list")
        ->required();
    sweep_cmd->add_option("--jobs", sweep_opts.jobs, "parallel runs")->default_val(1);

    std::string validate_config;
    CLI::App* validate_cmd = app.add_subcommand("validate", "check a config and dry-run");
    validate_cmd->add_option("--config", validate_config, "scenario config (JSON)");

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        if (*seed_opt) run_opts.seed = run_seed;
        if (*sched_opt) run_opts.scheduler = run_scheduler;
        return ransim::cmd_run(run_opts);
    }
    if (sweep_cmd->parsed()) return ransim::cmd_sweep(sweep_opts);
    return ransim::cmd_validate(validate_config);
}
