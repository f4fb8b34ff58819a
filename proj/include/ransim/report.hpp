// SPDX-License-Identifier: Apache-2.0
//
// CSV serialisation of runs and comparisons. Every file starts with a
// comment block embedding the effective spec (seed included) so each output
// is self-describing, and files are written atomically (temp + rename) so
// parallel sweep cells never interleave.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ransim/config.hpp"
#include "ransim/errors.hpp"
#include "ransim/simcore.hpp"

namespace ransim {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string spec_header(const ScenarioSpec& spec) {
    return "# ransim\n# spec: " + spec_to_json(spec).dump() + "\n";
}

inline std::string slots_csv(const SimulationReport& r) {
    std::string out = spec_header(r.spec);
    out += "slot,scheduler,mean_se,p50_latency_ms,p95_latency_ms,jain,rejected\n";
    const char* sched = to_string(r.spec.scheduler);
    for (const SlotMetrics& m : r.slots) {
        out += std::to_string(m.slot);
        out += ',';
        out += sched;
        out += ',';
        out += format_double(m.mean_se);
        out += ',';
        out += format_double(m.p50_latency_ms);
        out += ',';
        out += format_double(m.p95_latency_ms);
        out += ',';
        out += format_double(m.jain_fairness);
        out += ',';
        out += std::to_string(m.rejected_requests);
        out += '\n';
    }
    return out;
}

inline std::string summary_csv(const SimulationReport& r) {
    std::string out = spec_header(r.spec);
    out += "scheduler,seed,n_ues,n_slots,measure_start_slot,latency_samples,"
           "mean_latency_ms,latency_variance,p50_latency_ms,p95_latency_ms,"
           "p99_latency_ms,mean_se,mean_jain,total_served_bits,total_rejected\n";
    const Aggregates& a = r.agg;
    out += std::string(to_string(r.spec.scheduler)) + ',' + std::to_string(r.spec.seed) +
           ',' + std::to_string(r.spec.n_ues) + ',' + std::to_string(r.spec.n_slots) + ',' +
           std::to_string(r.measure_start_slot) + ',' + std::to_string(a.latency_samples) +
           ',' + format_double(a.mean_latency_ms) + ',' + format_double(a.latency_variance) +
           ',' + format_double(a.p50_latency_ms) + ',' + format_double(a.p95_latency_ms) +
           ',' + format_double(a.p99_latency_ms) + ',' + format_double(a.mean_se) + ',' +
           format_double(a.mean_jain) + ',' + std::to_string(a.total_served_bits) + ',' +
           std::to_string(a.total_rejected) + '\n';
    return out;
}

inline std::string deployments_csv(const SimulationReport& r) {
    std::string out = spec_header(r.spec);
    out += "slot,request_id,functionality,class,model_id,host,app_type,"
           "control_latency_ms,status,reason\n";
    for (const DeploymentRow& d : r.deployments) {
        out += std::to_string(d.slot);
        out += ',';
        out += std::to_string(d.request_id);
        out += ',';
        out += to_string(d.functionality);
        out += ',';
        out += to_string(d.latency_class);
        out += ',';
        out += d.model_id;
        out += ',';
        out += d.accepted ? std::to_string(d.host) : std::string();
        out += ',';
        out += d.app_type;
        out += ',';
        out += d.accepted ? format_double(d.control_latency_ms) : std::string();
        out += ',';
        out += d.accepted ? "accepted" : "rejected";
        out += ',';
        out += d.reason;
        out += '\n';
    }
    return out;
}

inline std::string latency_percentiles_csv(const SimulationReport& r) {
    std::string out = spec_header(r.spec);
    out += "percentile,latency_ms\n";
    for (std::size_t i = 0; i < r.latency_percentiles.size(); ++i)
        out += std::to_string(i + 1) + ',' + format_double(r.latency_percentiles[i]) + '\n';
    return out;
}

inline std::string comparison_csv(const ComparisonTable& table, const ScenarioSpec& base) {
    std::string out = spec_header(base);
    out += "scheduler,runs,n_ues,mean_se,mean_latency_ms,latency_variance,"
           "p50_latency_ms,p95_latency_ms,p99_latency_ms,mean_jain,total_rejected\n";
    for (const SchedulerAggregate& row : table.rows) {
        out += std::string(to_string(row.scheduler)) + ',' + std::to_string(row.runs) + ',' +
               std::to_string(row.n_ues) + ',' + format_double(row.mean.mean_se) + ',' +
               format_double(row.mean.mean_latency_ms) + ',' +
               format_double(row.mean.latency_variance) + ',' +
               format_double(row.mean.p50_latency_ms) + ',' +
               format_double(row.mean.p95_latency_ms) + ',' +
               format_double(row.mean.p99_latency_ms) + ',' +
               format_double(row.mean.mean_jain) + ',' +
               std::to_string(row.mean.total_rejected) + '\n';
    }
    return out;
}

inline std::string pairwise_csv(const ComparisonTable& table, const ScenarioSpec& base) {
    std::string out = spec_header(base);
    out += "scheduler_a,scheduler_b,se_improvement_pct,latency_delta_ms\n";
    for (const PairwiseDelta& d : table.pairwise)
        out += std::string(to_string(d.a)) + ',' + to_string(d.b) + ',' +
               format_double(d.se_improvement_pct) + ',' +
               format_double(d.latency_delta_ms) + '\n';
    return out;
}

/// Mean latency percentile curves per scheduler across seeds; enough to
/// redraw the latency comparison with any plotting tool.
inline std::string plot_latency_csv(std::span<const SimulationReport> reports,
                                    const ScenarioSpec& base) {
    std::string out = spec_header(base);
    out += "scheduler,percentile,latency_ms\n";
    for (int k = 0; k < 4; ++k) {
        auto kind = static_cast<SchedulerKind>(k);
        int runs = 0;
        std::vector<double> sums(99, 0.0);
        for (const SimulationReport& r : reports) {
            if (r.spec.scheduler != kind) continue;
            ++runs;
            for (std::size_t i = 0; i < 99 && i < r.latency_percentiles.size(); ++i)
                sums[i] += r.latency_percentiles[i];
        }
        if (runs == 0) continue;
        for (std::size_t i = 0; i < 99; ++i)
            out += std::string(to_string(kind)) + ',' + std::to_string(i + 1) + ',' +
                   format_double(sums[i] / runs) + '\n';
    }
    return out;
}

/// One (n_ues, mean SE) point per scheduler; sweeps at different loads
/// concatenate into the spectral-efficiency-versus-load curve.
inline std::string plot_se_csv(const ComparisonTable& table, const ScenarioSpec& base) {
    std::string out = spec_header(base);
    out += "scheduler,n_ues,mean_se\n";
    for (const SchedulerAggregate& row : table.rows)
        out += std::string(to_string(row.scheduler)) + ',' + std::to_string(row.n_ues) +
               ',' + format_double(row.mean.mean_se) + '\n';
    return out;
}

/// Write-temp-then-rename so readers never see a half-written file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw SimError("cannot write " + tmp.string());
        f << content;
    }
    std::filesystem::rename(tmp, path);
}

/// The four per-run files.
inline void write_run_files(const std::filesystem::path& dir, const SimulationReport& r) {
    write_atomic(dir / "slots.csv", slots_csv(r));
    write_atomic(dir / "summary.csv", summary_csv(r));
    write_atomic(dir / "deployments.csv", deployments_csv(r));
    write_atomic(dir / "latency_percentiles.csv", latency_percentiles_csv(r));
}

}  // namespace ransim
