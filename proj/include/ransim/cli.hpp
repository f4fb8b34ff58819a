// SPDX-License-Identifier: Apache-2.0
//
// Command implementations behind the ransim binary: single runs, scheduler
// sweeps with a bounded worker pool, and config validation with a short dry
// run. Kept out of main() so tests can drive them directly.
#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ransim/config.hpp"
#include "ransim/report.hpp"
#include "ransim/simcore.hpp"

namespace ransim {

inline ScenarioSpec load_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SimError("cannot open config file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

/// RANSIM_OUT overrides whatever output directory the command line gave.
inline std::filesystem::path resolve_out_dir(const std::string& cli_out) {
    const char* env = std::getenv("RANSIM_OUT");
    if (env != nullptr && *env != '\0') return env;
    return cli_out;
}

/// Seed list syntax: an inclusive range "N..M" or a comma list "a,b,c".
inline std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    auto dots = text.find("..");
    if (dots != std::string::npos) {
        std::uint64_t lo = std::stoull(text.substr(0, dots));
        std::uint64_t hi = std::stoull(text.substr(dots + 2));
        if (hi < lo) throw InvalidArgumentError("seed range is empty: " + text);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) seeds.push_back(std::stoull(item));
    if (seeds.empty()) throw InvalidArgumentError("no seeds in '" + text + "'");
    return seeds;
}

struct RunOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheduler;
};

inline int cmd_run(const RunOptions& opts) {
    try {
        ScenarioSpec spec = opts.config_path.empty() ? ScenarioSpec{}
                                                     : load_config_file(opts.config_path);
        if (opts.seed) spec.seed = *opts.seed;
        if (opts.scheduler) spec.scheduler = parse_scheduler(*opts.scheduler);
        validate_spec(spec);
        SimulationReport report = run(spec);
        std::filesystem::path dir = resolve_out_dir(opts.out_dir);
        write_run_files(dir, report);
        std::cout << to_string(spec.scheduler) << " seed " << spec.seed << ": mean SE "
                  << format_double(report.agg.mean_se) << " bit/s/Hz, mean latency "
                  << format_double(report.agg.mean_latency_ms) << " ms ("
                  << report.agg.latency_samples << " packets, "
                  << format_double(report.wall_clock_s) << " s)\n";
        if (spec.scheduler == SchedulerKind::OrchestRAN) {
            std::cout << "actions:";
            for (int a = 0; a < kSchedActionCount; ++a)
                std::cout << ' ' << to_string(static_cast<SchedAction>(a)) << '='
                          << report.action_counts[static_cast<std::size_t>(a)];
            std::cout << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return 1;
    }
}

struct SweepOptions {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> schedulers;
    std::string seeds;
    int jobs = 1;
};

namespace detail {

struct SweepCell {
    std::string scheduler_name;
    std::uint64_t seed = 0;
};

}  // namespace detail

/// Runs the scheduler x seed product, each cell in its own subdirectory,
/// then the cross-scheduler comparison and plot data. Cell failures are
/// reported and skipped; the exit status is zero only if every cell
/// produced its report.
inline int cmd_sweep(const SweepOptions& opts) {
    ScenarioSpec base;
    std::vector<detail::SweepCell> cells;
    std::vector<std::uint64_t> seeds;
    try {
        base = opts.config_path.empty() ? ScenarioSpec{}
                                        : load_config_file(opts.config_path);
        validate_spec(base);
        if (opts.schedulers.empty()) throw InvalidArgumentError("no schedulers given");
        seeds = parse_seed_list(opts.seeds);
        for (const std::string& s : opts.schedulers)
            for (std::uint64_t seed : seeds) cells.push_back({s, seed});
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << '\n';
        return 1;
    }

    std::filesystem::path out = resolve_out_dir(opts.out_dir);
    std::vector<std::optional<SimulationReport>> reports(cells.size());
    std::vector<std::string> failures(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const detail::SweepCell& cell = cells[i];
            try {
                ScenarioSpec spec = base;
                spec.scheduler = parse_scheduler(cell.scheduler_name);
                spec.seed = cell.seed;
                SimulationReport report = run(spec);
                std::filesystem::path dir =
                    out / (std::string(to_string(spec.scheduler)) + "_seed" +
                           std::to_string(cell.seed));
                write_run_files(dir, report);
                reports[i] = std::move(report);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };

    int jobs = std::max(1, opts.jobs);
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    int failed = 0;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (!reports[i]) {
            ++failed;
            std::cerr << "cell " << cells[i].scheduler_name << " seed " << cells[i].seed
                      << " failed: " << failures[i] << '\n';
        }

    std::vector<SimulationReport> ok;
    for (auto& r : reports)
        if (r) ok.push_back(std::move(*r));
    if (ok.size() >= 2) {
        try {
            ComparisonTable table = compare(ok);
            const ScenarioSpec& header_spec = ok.front().spec;
            write_atomic(out / "comparison.csv", comparison_csv(table, header_spec));
            write_atomic(out / "pairwise.csv", pairwise_csv(table, header_spec));
            write_atomic(out / "plot_latency_percentiles.csv",
                         plot_latency_csv(ok, header_spec));
            write_atomic(out / "plot_se_vs_load.csv", plot_se_csv(table, header_spec));
            for (const SchedulerAggregate& row : table.rows)
                std::cout << to_string(row.scheduler) << " (" << row.runs
                          << " runs): mean SE " << format_double(row.mean.mean_se)
                          << " bit/s/Hz, mean latency "
                          << format_double(row.mean.mean_latency_ms) << " ms, variance "
                          << format_double(row.mean.latency_variance) << '\n';
        } catch (const std::exception& e) {
            std::cerr << "comparison failed: " << e.what() << '\n';
            ++failed;
        }
    }
    return failed == 0 ? 0 : 1;
}

/// Parse, check, dry-run for ten slots, and echo the effective spec.
inline int cmd_validate(const std::string& config_path) {
    try {
        ScenarioSpec spec =
            config_path.empty() ? ScenarioSpec{} : load_config_file(config_path);
        validate_spec(spec);
        ScenarioSpec dry = spec;
        dry.n_slots = std::min(spec.n_slots, 10);
        dry.measure_start_slot = 0;
        run(dry);
        std::cout << spec_to_json(spec).dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "validate failed: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace ransim
