// SPDX-License-Identifier: Apache-2.0
//
// The discrete-time engine. Each slot: UE packet arrivals, per-link channel
// draws, per-DU scheduling under the selected policy, backlog draining at
// Shannon rate, and metric collection. Orchestration epochs interleave:
// operator requests are generated, planned onto the node graph, and applied,
// which sets the control-loop overhead charged to completed packets.
//
// Everything is deterministic given the spec: all randomness flows through
// substreams keyed by (seed, domain, slot, entity), so neither loop order
// nor thread scheduling can change a result.
#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ransim/channel.hpp"
#include "ransim/config.hpp"
#include "ransim/errors.hpp"
#include "ransim/orchestrator.hpp"
#include "ransim/rng.hpp"
#include "ransim/sched.hpp"
#include "ransim/topology.hpp"
#include "ransim/traffic.hpp"

namespace ransim {

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Completed-packet latency: whole slots spent queued, plus transmission
/// time at the serving rate, plus the control-loop overhead of the
/// deployment driving the serving cell.
inline double packet_latency(int enqueue_slot, int dequeue_slot, std::int64_t bits,
                             double rate_bps, double control_overhead_ms,
                             double slot_duration_ms) {
    if (dequeue_slot < enqueue_slot)
        throw InvalidArgumentError("packet dequeued before it arrived");
    if (rate_bps <= 0.0) throw ZeroRateError("service rate must be positive");
    return (dequeue_slot - enqueue_slot) * slot_duration_ms +
           static_cast<double>(bits) / rate_bps * 1000.0 + control_overhead_ms;
}

/// Jain fairness index, (sum x)^2 / (n sum x^2), in [1/n, 1].
inline double jain(std::span<const double> values) {
    if (values.empty()) throw AllZeroError("jain needs at least one positive value");
    double sum = 0.0, sum_sq = 0.0;
    for (double v : values) {
        sum += v;
        sum_sq += v * v;
    }
    if (sum_sq <= 0.0) throw AllZeroError("jain needs at least one positive value");
    return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

/// Nearest-rank percentile of an ascending-sorted sample; p in (0, 100].
inline double percentile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    auto rank = static_cast<std::size_t>(
        std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
    if (rank == 0) rank = 1;
    return sorted[std::min(rank, sorted.size()) - 1];
}

struct SlotMetrics {
    int slot = 0;
    double mean_se = 0.0;       // PRB-weighted over this slot's allocations
    double se_prb_sum = 0.0;    // sum of SE * granted PRBs
    std::int64_t prbs_allocated = 0;
    double p50_latency_ms = 0.0;
    double p95_latency_ms = 0.0;
    double jain_fairness = 1.0;
    int rejected_requests = 0;
    std::vector<double> latency_samples_ms;      // kept for measured slots
    // Per-UE traces, populated only when the spec asks for them.
    std::vector<std::int64_t> served_bits_per_ue;
    std::vector<std::int64_t> arrived_bits_per_ue;
    std::vector<double> se_per_ue;
    std::vector<int> prbs_per_ue;
};

struct Aggregates {
    double mean_latency_ms = 0.0;
    double latency_variance = 0.0;
    double p50_latency_ms = 0.0;
    double p95_latency_ms = 0.0;
    double p99_latency_ms = 0.0;
    std::int64_t latency_samples = 0;
    double mean_se = 0.0;  // ratio of sums over the window
    double mean_jain = 0.0;
    std::int64_t total_served_bits = 0;
    std::int64_t total_rejected = 0;
};

struct DeploymentRow {
    int slot = 0;
    RequestId request_id = 0;
    Functionality functionality = Functionality::Scheduling;
    LatencyClass latency_class = LatencyClass::RealTime;
    std::string model_id;  // empty for rejections
    NodeId host = -1;
    std::string app_type;
    double control_latency_ms = 0.0;
    bool accepted = false;
    std::string reason;  // empty for accepted
};

struct SimulationReport {
    ScenarioSpec spec;
    std::vector<SlotMetrics> slots;
    Aggregates agg;                     // over the measurement window
    std::vector<double> latency_percentiles;  // p1..p99 over the window
    int measure_start_slot = 0;
    std::int64_t total_arrived_bits = 0;  // whole run
    std::int64_t total_served_bits = 0;   // whole run
    std::vector<DeploymentRow> deployments;
    // Adaptive runs only: how often each scheduling preset was chosen.
    std::array<std::int64_t, kSchedActionCount> action_counts{};
    double wall_clock_s = 0.0;  // informational; never serialised
};

/// Recomputes the window aggregates from per-slot records. The report's own
/// aggregates must match this to floating-point round-off.
inline Aggregates recompute_aggregates(const std::vector<SlotMetrics>& slots,
                                       int measure_start) {
    Aggregates agg;
    std::vector<double> samples;
    double se_sum = 0.0;
    std::int64_t prb_sum = 0;
    double jain_sum = 0.0;
    std::int64_t window_slots = 0;
    for (const SlotMetrics& m : slots) {
        if (m.slot < measure_start) continue;
        ++window_slots;
        samples.insert(samples.end(), m.latency_samples_ms.begin(),
                       m.latency_samples_ms.end());
        se_sum += m.se_prb_sum;
        prb_sum += m.prbs_allocated;
        jain_sum += m.jain_fairness;
        agg.total_rejected += m.rejected_requests;
        for (std::int64_t b : m.served_bits_per_ue) agg.total_served_bits += b;
    }
    std::sort(samples.begin(), samples.end());
    agg.latency_samples = static_cast<std::int64_t>(samples.size());
    if (!samples.empty()) {
        double mean = 0.0;
        for (double s : samples) mean += s;
        mean /= static_cast<double>(samples.size());
        double var = 0.0;
        for (double s : samples) var += (s - mean) * (s - mean);
        var /= static_cast<double>(samples.size());
        agg.mean_latency_ms = mean;
        agg.latency_variance = var;
        agg.p50_latency_ms = percentile_sorted(samples, 50.0);
        agg.p95_latency_ms = percentile_sorted(samples, 95.0);
        agg.p99_latency_ms = percentile_sorted(samples, 99.0);
    }
    agg.mean_se = prb_sum > 0 ? se_sum / static_cast<double>(prb_sum) : 0.0;
    agg.mean_jain = window_slots > 0 ? jain_sum / static_cast<double>(window_slots) : 0.0;
    return agg;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

namespace detail {

struct Packet {
    int arrival_slot = 0;
    std::int64_t bits_left = 0;
};

class Engine {
public:
    explicit Engine(ScenarioSpec spec) : spec_(std::move(spec)) {
        validate_spec(spec_);
        catalog_ = spec_.make_catalog();

        Rng topo_rng = substream(spec_.seed, {rng_tag::kTopology});
        topo_ = build_topology(spec_.topology, topo_rng);

        cells_ = topo_.ids_of_kind(NodeKind::Ru);
        dus_ = topo_.ids_of_kind(NodeKind::Du);
        cell_du_.resize(cells_.size());
        du_cells_.resize(dus_.size());
        for (std::size_t c = 0; c < cells_.size(); ++c) {
            NodeId du = topo_.serving_du(cells_[c]);
            for (std::size_t d = 0; d < dus_.size(); ++d)
                if (dus_[d] == du) {
                    cell_du_[c] = d;
                    du_cells_[d].push_back(c);
                }
        }

        Rng ue_rng = substream(spec_.seed, {rng_tag::kUeSpawn});
        ues_ = spawn_ues(topo_, spec_.traffic, ue_rng, spec_.n_ues);
        ue_cell_.resize(ues_.size());
        cell_ues_.resize(cells_.size());
        for (std::size_t u = 0; u < ues_.size(); ++u) {
            for (std::size_t c = 0; c < cells_.size(); ++c)
                if (cells_[c] == ues_[u].serving_ru) ue_cell_[u] = c;
            cell_ues_[ue_cell_[u]].push_back(static_cast<UeId>(u));
        }

        // Pairwise link budgets, precomputed since geometry never moves. The
        // horizontal distance is clamped to the model's 10 m validity floor.
        // rx_*_db is the received power on one PRB (power split evenly over
        // the grid) before shadowing and fading.
        budgets_.resize(ues_.size() * cells_.size());
        double tx_prb_db = spec_.radio.tx_power_dbm -
                           10.0 * std::log10(static_cast<double>(spec_.radio.prb_count)) +
                           spec_.radio.antenna_gain_db;
        for (std::size_t u = 0; u < ues_.size(); ++u)
            for (std::size_t c = 0; c < cells_.size(); ++c) {
                const Node& ru = topo_.node(cells_[c]);
                LinkGeometry g;
                g.d2d_m = std::max(10.0, distance(ues_[u].position, *ru.position));
                g.h_bs_m = ru.height_m;
                g.h_ut_m = spec_.radio.ue_height_m;
                g.fc_ghz = spec_.radio.fc_ghz;
                PathLossPair pl = path_loss_pair(g);
                budgets_[u * cells_.size() + c] = {pl.los_prob, tx_prb_db - pl.pl_los_db,
                                                   tx_prb_db - pl.pl_nlos_db};
            }
        noise_prb_lin_ = db_to_linear(kThermalNoiseDbmHz +
                                      10.0 * std::log10(kPrbBandwidthHz) +
                                      spec_.radio.noise_figure_db);

        queues_.resize(ues_.size());
        cum_arrived_.assign(ues_.size(), 0);
        cum_served_.assign(ues_.size(), 0);
        control_overhead_ms_.assign(cells_.size(),
                                    2.0 * spec_.topology.latency_du_ru_ms);
        rr_states_.resize(cells_.size());
        pf_states_.resize(dus_.size());
        for (std::size_t d = 0; d < dus_.size(); ++d) {
            pf_states_[d].time_constant_slots = spec_.pf.time_constant_slots;
            for (std::size_t c : du_cells_[d])
                for (UeId ue : cell_ues_[c]) pf_states_[d].track(ue);
        }
        agents_.resize(dus_.size());
        for (AgentState& a : agents_) {
            a.alpha = spec_.rl.alpha;
            a.gamma = spec_.rl.gamma;
            a.w_se = spec_.rl.w_se;
            a.w_lat = spec_.rl.w_lat;
            // Optimistic start at the value ceiling (max per-slot reward is
            // w_se) so every action gets sampled before greed locks in.
            double q0 = a.w_se / (1.0 - a.gamma);
            for (auto& row : a.q_table) row.fill(q0);
        }
        pending_.assign(dus_.size(), {});

        se_.assign(ues_.size(), 0.0);
        sinr_.assign(ues_.size(), 0.0);
    }

    SimulationReport run() {
        auto t0 = std::chrono::steady_clock::now();
        SimulationReport report;
        report.spec = spec_;
        report.measure_start_slot = spec_.effective_measure_start();
        report.slots.reserve(static_cast<std::size_t>(spec_.n_slots));
        for (int slot = 0; slot < spec_.n_slots; ++slot)
            report.slots.push_back(step(slot, report));
        report.agg = recompute_aggregates(report.slots, report.measure_start_slot);
        if (!spec_.record_per_ue) {
            // recompute_aggregates only sees per-UE bits when recorded
            report.agg.total_served_bits = window_served_bits_;
        }
        std::vector<double> sorted_samples = window_samples_sorted(report);
        for (int p = 1; p <= 99; ++p)
            report.latency_percentiles.push_back(
                percentile_sorted(sorted_samples, static_cast<double>(p)));
        report.total_arrived_bits = total_arrived_;
        report.total_served_bits = total_served_;
        report.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return report;
    }

private:
    struct Pending {
        bool valid = false;
        Observation obs;
        SchedAction action = SchedAction::PurePf;
        double reward = 0.0;
    };

    std::vector<double> window_samples_sorted(const SimulationReport& report) const {
        std::vector<double> samples;
        for (const SlotMetrics& m : report.slots)
            samples.insert(samples.end(), m.latency_samples_ms.begin(),
                           m.latency_samples_ms.end());
        std::sort(samples.begin(), samples.end());
        return samples;
    }

    SlotMetrics step(int slot, SimulationReport& report) {
        SlotMetrics metrics;
        metrics.slot = slot;

        if (spec_.record_per_ue) {
            metrics.served_bits_per_ue.assign(ues_.size(), 0);
            metrics.arrived_bits_per_ue.assign(ues_.size(), 0);
            metrics.se_per_ue.assign(ues_.size(), 0.0);
            metrics.prbs_per_ue.assign(ues_.size(), 0);
        }

        // --- orchestration epoch ---
        if (spec_.orchestration_epoch_slots > 0 &&
            slot % spec_.orchestration_epoch_slots == 0 && spec_.requests_per_slot > 0) {
            Rng req_rng = substream(spec_.seed, {rng_tag::kRequests,
                                                 static_cast<std::uint64_t>(slot)});
            auto requests = generate_requests(topo_, spec_.traffic, req_rng, slot,
                                              spec_.requests_per_slot);
            DeploymentPlan dplan = plan(requests, catalog_, topo_);
            apply_plan(topo_, dplan);
            if (dplan.accepted.size() + dplan.rejected.size() != requests.size())
                throw SimError("plan lost requests at slot " + std::to_string(slot));
            for (const Node& n : topo_.nodes)
                if (n.compute_used > n.compute_capacity)
                    throw SimError("capacity violated on node " + std::to_string(n.id));
            record_plan(slot, requests, dplan, report);
            metrics.rejected_requests = static_cast<int>(dplan.rejected.size());
        }

        // --- arrivals ---
        for (std::size_t u = 0; u < ues_.size(); ++u) {
            Rng arr_rng = substream(spec_.seed, {rng_tag::kArrivals,
                                                 static_cast<std::uint64_t>(slot),
                                                 static_cast<std::uint64_t>(u)});
            int n = accumulate_arrivals(ues_[u], spec_.traffic, arr_rng,
                                        spec_.slot_duration_ms);
            for (int p = 0; p < n; ++p)
                queues_[u].push_back({slot, spec_.traffic.packet_bits});
            std::int64_t bits = static_cast<std::int64_t>(n) * spec_.traffic.packet_bits;
            cum_arrived_[u] += bits;
            total_arrived_ += bits;
            if (spec_.record_per_ue) metrics.arrived_bits_per_ue[u] = bits;
        }

        // --- channel: per-UE SINR and spectral efficiency ---
        std::vector<bool> cell_active(cells_.size(), false);
        for (std::size_t u = 0; u < ues_.size(); ++u)
            if (ues_[u].backlog_bits > 0) cell_active[ue_cell_[u]] = true;

        // Per-PRB SINR: power is split evenly over the grid and noise scales
        // with bandwidth, so per-PRB values equal any allocation's. Sums run
        // in the linear domain; this is the composition of draw_realization
        // and sinr_db with the dB round-trips removed (equivalence is unit
        // tested).
        for (std::size_t u = 0; u < ues_.size(); ++u) {
            if (ues_[u].backlog_bits <= 0) continue;
            std::size_t c = ue_cell_[u];
            Rng ch_rng = substream(spec_.seed, {rng_tag::kChannel,
                                                static_cast<std::uint64_t>(slot),
                                                static_cast<std::uint64_t>(u),
                                                static_cast<std::uint64_t>(cells_[c])});
            const PairBudget& sb = budgets_[u * cells_.size() + c];
            FadingDraw sf = draw_fading(sb.los_prob, ch_rng);
            double s_lin = db_to_linear((sf.los ? sb.rx_los_db : sb.rx_nlos_db) -
                                        sf.shadow_db) *
                           sf.fade_power;
            double i_lin = 0.0;
            std::size_t my_du = cell_du_[c];
            for (std::size_t ic = 0; ic < cells_.size(); ++ic) {
                if (!cell_active[ic] || cell_du_[ic] == my_du) continue;
                Rng irng = substream(spec_.seed, {rng_tag::kChannel,
                                                  static_cast<std::uint64_t>(slot),
                                                  static_cast<std::uint64_t>(u),
                                                  static_cast<std::uint64_t>(cells_[ic])});
                const PairBudget& ib = budgets_[u * cells_.size() + ic];
                FadingDraw f = draw_fading(ib.los_prob, irng);
                i_lin += db_to_linear((f.los ? ib.rx_los_db : ib.rx_nlos_db) -
                                      f.shadow_db) *
                         f.fade_power;
            }
            double ratio = s_lin / (noise_prb_lin_ + i_lin);
            sinr_[u] = 10.0 * std::log10(ratio);
            se_[u] = sinr_[u] < spec_.radio.min_sinr_db
                         ? 0.0  // outage: nothing decodes
                         : std::min(std::log2(1.0 + ratio), spec_.radio.se_cap);
        }

        // --- per-DU scheduling and service ---
        for (std::size_t d = 0; d < dus_.size(); ++d) {
            SchedAction action = SchedAction::PurePf;
            Observation obs;
            if (spec_.scheduler == SchedulerKind::OrchestRAN) {
                obs = observe_du(d);
                if (pending_[d].valid)
                    learn(agents_[d], pending_[d].obs, pending_[d].action,
                          pending_[d].reward, obs);
                agents_[d].epsilon =
                    epsilon_at(slot, spec_.rl.epsilon_start, spec_.rl.epsilon_end,
                               spec_.rl.epsilon_decay_slots);
                Rng agent_rng = substream(spec_.seed, {rng_tag::kAgent,
                                                       static_cast<std::uint64_t>(slot),
                                                       static_cast<std::uint64_t>(d)});
                action = act(agents_[d], obs, agent_rng);
                ++report.action_counts[static_cast<std::size_t>(action)];
            }

            double du_se_prb_sum = 0.0;
            std::int64_t du_prbs = 0;
            std::vector<std::pair<UeId, std::int64_t>> du_served;
            for (std::size_t c : du_cells_[d]) {
                auto [se_sum, prbs] =
                    schedule_and_serve_cell(c, slot, action, metrics, du_served);
                du_se_prb_sum += se_sum;
                du_prbs += prbs;
            }

            if (spec_.scheduler == SchedulerKind::ProportionalFair ||
                spec_.scheduler == SchedulerKind::OrchestRAN)
                update_pf(pf_states_[d], du_served, spec_.slot_duration_ms);

            if (spec_.scheduler == SchedulerKind::OrchestRAN) {
                // Both reward terms live in [0, 1]: SE relative to the cap,
                // and head-of-line delay relative to the class bound with
                // per-UE saturation at the bound. Saturation keeps the
                // latency term from drowning the SE signal once a cell is
                // hopelessly backlogged.
                double se_term =
                    du_prbs > 0
                        ? du_se_prb_sum / static_cast<double>(du_prbs) / spec_.radio.se_cap
                        : 0.0;
                double hol_sum = 0.0;
                int hol_n = 0;
                for (std::size_t c : du_cells_[d])
                    for (UeId ue : cell_ues_[c])
                        if (!queues_[static_cast<std::size_t>(ue)].empty()) {
                            double hol = (slot - queues_[static_cast<std::size_t>(ue)]
                                                     .front()
                                                     .arrival_slot) *
                                         spec_.slot_duration_ms;
                            hol_sum += std::min(hol, spec_.rl.delay_norm_ms);
                            ++hol_n;
                        }
                double lat_term =
                    hol_n > 0 ? hol_sum / hol_n / spec_.rl.delay_norm_ms : 0.0;
                pending_[d] = {true, obs, action,
                               agents_[d].w_se * se_term - agents_[d].w_lat * lat_term};
            }

            metrics.se_prb_sum += du_se_prb_sum;
            metrics.prbs_allocated += du_prbs;
        }

        // --- bookkeeping and invariants ---
        bool audit_queues = slot % 64 == 0 || slot + 1 == spec_.n_slots;
        for (std::size_t u = 0; u < ues_.size(); ++u) {
            if (ues_[u].backlog_bits != cum_arrived_[u] - cum_served_[u])
                throw SimError("backlog conservation violated for UE " + std::to_string(u) +
                               " at slot " + std::to_string(slot));
            if (audit_queues) {  // full queue walk is O(queued packets), so sampled
                std::int64_t queued = 0;
                for (const Packet& p : queues_[u]) queued += p.bits_left;
                if (queued != ues_[u].backlog_bits)
                    throw SimError("queue drift for UE " + std::to_string(u) + " at slot " +
                                   std::to_string(slot));
            }
        }

        metrics.mean_se =
            metrics.prbs_allocated > 0
                ? metrics.se_prb_sum / static_cast<double>(metrics.prbs_allocated)
                : 0.0;

        std::vector<double> served_values;
        for (std::size_t u = 0; u < ues_.size(); ++u)
            if (backlogged_at_start_[u])
                served_values.push_back(static_cast<double>(served_this_slot_[u]));
        bool any_positive = false;
        for (double v : served_values) any_positive |= v > 0.0;
        metrics.jain_fairness =
            any_positive ? jain(served_values) : 1.0;

        std::sort(metrics.latency_samples_ms.begin(), metrics.latency_samples_ms.end());
        metrics.p50_latency_ms = percentile_sorted(metrics.latency_samples_ms, 50.0);
        metrics.p95_latency_ms = percentile_sorted(metrics.latency_samples_ms, 95.0);
        if (slot >= spec_.effective_measure_start()) {
            window_served_bits_ += slot_served_bits_;
        } else {
            metrics.latency_samples_ms.clear();  // keep memory bounded
            metrics.latency_samples_ms.shrink_to_fit();
        }
        slot_served_bits_ = 0;
        return metrics;
    }

    /// Schedules one cell under the given policy/action, serves backlogs and
    /// collects latency samples. Returns (sum of SE*PRBs, PRBs granted).
    std::pair<double, std::int64_t> schedule_and_serve_cell(
        std::size_t c, int slot, SchedAction action, SlotMetrics& metrics,
        std::vector<std::pair<UeId, std::int64_t>>& du_served) {
        const double slot_s = spec_.slot_duration_ms / 1000.0;
        if (backlogged_at_start_.size() != ues_.size())
            backlogged_at_start_.assign(ues_.size(), false);
        if (served_this_slot_.size() != ues_.size())
            served_this_slot_.assign(ues_.size(), 0);

        std::vector<UeId> backlogged;
        for (UeId ue : cell_ues_[c])
            if (ues_[static_cast<std::size_t>(ue)].backlog_bits > 0)
                backlogged.push_back(ue);
        for (UeId ue : cell_ues_[c]) {
            backlogged_at_start_[static_cast<std::size_t>(ue)] =
                ues_[static_cast<std::size_t>(ue)].backlog_bits > 0;
            served_this_slot_[static_cast<std::size_t>(ue)] = 0;
        }
        if (backlogged.empty()) return {0.0, 0};

        const int prbs = spec_.radio.prb_count;
        std::size_t d = cell_du_[c];
        std::vector<double> eff_se(backlogged.size());
        for (std::size_t i = 0; i < backlogged.size(); ++i)
            eff_se[i] = se_[static_cast<std::size_t>(backlogged[i])];

        Allocation alloc;
        std::int64_t demand_prbs = 0;
        bool demand_capped = false;

        auto hol_ms = [&](UeId ue) {
            const auto& q = queues_[static_cast<std::size_t>(ue)];
            return q.empty() ? 0.0
                             : (slot - q.front().arrival_slot) * spec_.slot_duration_ms;
        };
        // Smallest grant whose delivered bits cover the backlog, matching the
        // allocators' stopping predicate exactly despite rounding.
        auto prbs_to_satisfy = [](std::int64_t backlog, double bpp) {
            auto g = static_cast<std::int64_t>(
                std::ceil(static_cast<double>(backlog) / bpp));
            while (g > 0 && static_cast<double>(g - 1) * bpp >=
                                static_cast<double>(backlog))
                --g;
            while (static_cast<double>(g) * bpp < static_cast<double>(backlog)) ++g;
            return g;
        };

        switch (effective_policy(action)) {
            case CellPolicy::RoundRobin: {
                auto [a, next] = schedule_rr(rr_states_[c], backlogged, prbs);
                alloc = std::move(a);
                rr_states_[c] = next;
                break;
            }
            case CellPolicy::Pf:
            case CellPolicy::PfBoost: {
                bool boosted = effective_policy(action) == CellPolicy::PfBoost;
                if (boosted) apply_beam_boost(backlogged, eff_se);
                std::vector<PfUe> ues;
                ues.reserve(backlogged.size());
                for (std::size_t i = 0; i < backlogged.size(); ++i) {
                    PfUe pu;
                    pu.id = backlogged[i];
                    pu.rate_per_prb_bps = eff_se[i] * kPrbBandwidthHz;
                    pu.metric_boost =
                        boosted ? 1.0 + hol_ms(backlogged[i]) / spec_.rl.delay_norm_ms : 1.0;
                    ues.push_back(pu);
                }
                alloc = schedule_pf(pf_states_[d], ues, prbs);
                break;
            }
            case CellPolicy::MaxMin: {
                std::vector<MmUe> ues;
                for (std::size_t i = 0; i < backlogged.size(); ++i) {
                    double bpp = eff_se[i] * kPrbBandwidthHz * slot_s;
                    if (bpp <= 0.0) continue;
                    ues.push_back({backlogged[i], bpp,
                                   ues_[static_cast<std::size_t>(backlogged[i])]
                                       .backlog_bits});
                    demand_prbs += prbs_to_satisfy(ues.back().backlog_bits, bpp);
                }
                demand_capped = true;
                alloc = schedule_maxmin(ues, prbs);
                break;
            }
            case CellPolicy::Greedy: {
                apply_beam_boost(backlogged, eff_se);
                std::vector<GreedyUe> ues;
                for (std::size_t i = 0; i < backlogged.size(); ++i) {
                    double bpp = eff_se[i] * kPrbBandwidthHz * slot_s;
                    if (bpp <= 0.0) continue;
                    ues.push_back({backlogged[i], bpp,
                                   ues_[static_cast<std::size_t>(backlogged[i])]
                                       .backlog_bits});
                }
                for (const GreedyUe& gu : ues)
                    demand_prbs += static_cast<std::int64_t>(std::ceil(
                        static_cast<double>(gu.backlog_bits) / gu.bits_per_prb));
                demand_capped = true;
                alloc = schedule_greedy(ues, prbs);
                break;
            }
        }

        // PRB conservation and work conservation
        std::int64_t granted = alloc.allocated();
        if (granted > prbs)
            throw SimError("PRB conservation violated at slot " + std::to_string(slot));
        std::int64_t expected = demand_capped
                                    ? std::min<std::int64_t>(prbs, demand_prbs)
                                    : static_cast<std::int64_t>(prbs);
        if (granted != expected)
            throw SimError("work conservation violated at slot " + std::to_string(slot) +
                           " cell " + std::to_string(c));

        // --- serve ---
        double se_prb_sum = 0.0;
        for (const auto& [ue, n_prbs] : alloc.prbs) {
            std::size_t u = static_cast<std::size_t>(ue);
            double ue_se = 0.0;
            for (std::size_t i = 0; i < backlogged.size(); ++i)
                if (backlogged[i] == ue) ue_se = eff_se[i];
            double rate_bps = ue_se * kPrbBandwidthHz * n_prbs;
            auto capacity_bits =
                static_cast<std::int64_t>(std::floor(rate_bps * slot_s));
            std::int64_t served = std::min(ues_[u].backlog_bits, capacity_bits);
            if (served < 0) served = 0;

            std::int64_t remaining = served;
            while (remaining > 0 && !queues_[u].empty()) {
                Packet& front = queues_[u].front();
                if (front.bits_left <= remaining) {
                    remaining -= front.bits_left;
                    metrics.latency_samples_ms.push_back(packet_latency(
                        front.arrival_slot, slot, spec_.traffic.packet_bits, rate_bps,
                        control_overhead_ms_[c], spec_.slot_duration_ms));
                    queues_[u].pop_front();
                } else {
                    front.bits_left -= remaining;
                    remaining = 0;
                }
            }
            ues_[u].backlog_bits -= served;
            cum_served_[u] += served;
            total_served_ += served;
            slot_served_bits_ += served;
            served_this_slot_[u] = served;
            se_prb_sum += ue_se * n_prbs;
            du_served.push_back({ue, served});
            if (spec_.record_per_ue) {
                metrics.served_bits_per_ue[u] = served;
                metrics.se_per_ue[u] = ue_se;
                metrics.prbs_per_ue[u] = n_prbs;
            }
        }
        return {se_prb_sum, granted};
    }

    enum class CellPolicy { RoundRobin, Pf, PfBoost, MaxMin, Greedy };

    CellPolicy effective_policy(SchedAction action) const {
        switch (spec_.scheduler) {
            case SchedulerKind::RoundRobin: return CellPolicy::RoundRobin;
            case SchedulerKind::ProportionalFair: return CellPolicy::Pf;
            case SchedulerKind::MaxMinFairness: return CellPolicy::MaxMin;
            case SchedulerKind::OrchestRAN: break;
        }
        switch (action) {
            case SchedAction::PurePf: return CellPolicy::Pf;
            case SchedAction::PfLatencyBoost: return CellPolicy::PfBoost;
            case SchedAction::MaxMinBlend: return CellPolicy::MaxMin;
            case SchedAction::ThroughputGreedy: return CellPolicy::Greedy;
        }
        return CellPolicy::Pf;
    }

    /// The serving beam points at the strongest UE in the cell: +boost dB on
    /// its SINR, unless it stays in outage. Ties to the lowest id.
    void apply_beam_boost(const std::vector<UeId>& backlogged,
                          std::vector<double>& eff_se) const {
        if (backlogged.empty()) return;
        std::size_t top = 0;
        for (std::size_t i = 1; i < backlogged.size(); ++i)
            if (eff_se[i] > eff_se[top]) top = i;
        double boosted = sinr_[static_cast<std::size_t>(backlogged[top])] +
                         spec_.rl.beam_boost_db;
        eff_se[top] = boosted < spec_.radio.min_sinr_db
                          ? 0.0
                          : spectral_efficiency(boosted, spec_.radio.se_cap);
    }

    Observation observe_du(std::size_t d) const {
        int backlogged = 0;
        double se_sum = 0.0;
        for (std::size_t c : du_cells_[d])
            for (UeId ue : cell_ues_[c])
                if (ues_[static_cast<std::size_t>(ue)].backlog_bits > 0) {
                    ++backlogged;
                    se_sum += se_[static_cast<std::size_t>(ue)];
                }
        double per_cell = du_cells_[d].empty()
                              ? 0.0
                              : static_cast<double>(backlogged) /
                                    static_cast<double>(du_cells_[d].size());
        double mean_se = backlogged > 0 ? se_sum / backlogged : 0.0;
        return Observation::from(per_cell, mean_se);
    }

    void record_plan(int slot, const std::vector<OperatorRequest>& requests,
                     const DeploymentPlan& dplan, SimulationReport& report) {
        std::map<RequestId, const OperatorRequest*> by_id;
        for (const OperatorRequest& r : requests) by_id[r.id] = &r;
        for (const Deployment& dep : dplan.accepted) {
            DeploymentRow row;
            row.slot = slot;
            row.request_id = dep.request_id;
            row.functionality = dep.functionality;
            row.latency_class = dep.latency_class;
            row.model_id = dep.model_id;
            row.host = dep.host;
            row.app_type = to_string(dep.app_type);
            row.control_latency_ms = dep.control_latency_ms;
            row.accepted = true;
            report.deployments.push_back(row);
            // A scheduling app takes over the control loop of the cells it
            // targets; completed packets there pay its control latency.
            if (dep.functionality == Functionality::Scheduling)
                for (NodeId ru : dep.target_rus)
                    for (std::size_t c = 0; c < cells_.size(); ++c)
                        if (cells_[c] == ru)
                            control_overhead_ms_[c] = dep.control_latency_ms;
        }
        for (const Rejection& rej : dplan.rejected) {
            DeploymentRow row;
            row.slot = slot;
            row.request_id = rej.request_id;
            const OperatorRequest* req = by_id.at(rej.request_id);
            row.functionality = req->functionality;
            row.latency_class = req->latency_class;
            row.accepted = false;
            row.reason = to_string(rej.reason);
            report.deployments.push_back(row);
        }
    }

    ScenarioSpec spec_;
    Catalog catalog_;
    Topology topo_;
    std::vector<NodeId> cells_;  // RU node ids, cell index order
    std::vector<NodeId> dus_;
    std::vector<std::size_t> cell_du_;
    std::vector<std::vector<std::size_t>> du_cells_;
    struct PairBudget {
        double los_prob = 1.0;
        double rx_los_db = 0.0;   // received dBm on one PRB under LOS loss
        double rx_nlos_db = 0.0;  // same under NLOS loss
    };

    std::vector<UeSession> ues_;
    std::vector<std::size_t> ue_cell_;
    std::vector<std::vector<UeId>> cell_ues_;
    std::vector<PairBudget> budgets_;
    double noise_prb_lin_ = 0.0;
    std::vector<std::deque<Packet>> queues_;
    std::vector<std::int64_t> cum_arrived_, cum_served_;
    std::vector<double> control_overhead_ms_;
    std::vector<RrState> rr_states_;
    std::vector<PfState> pf_states_;
    std::vector<AgentState> agents_;
    std::vector<Pending> pending_;
    std::vector<double> se_, sinr_;
    std::vector<bool> backlogged_at_start_;
    std::vector<std::int64_t> served_this_slot_;
    std::int64_t total_arrived_ = 0;
    std::int64_t total_served_ = 0;
    std::int64_t slot_served_bits_ = 0;
    std::int64_t window_served_bits_ = 0;
};

}  // namespace detail

/// Runs one scenario end to end. Deterministic given the spec.
inline SimulationReport run(const ScenarioSpec& spec) {
    detail::Engine engine(spec);
    return engine.run();
}

// ---------------------------------------------------------------------------
// Cross-run comparison
// ---------------------------------------------------------------------------

struct SchedulerAggregate {
    SchedulerKind scheduler = SchedulerKind::RoundRobin;
    int runs = 0;
    Aggregates mean;  // element-wise mean across runs
    int n_ues = 0;
};

struct PairwiseDelta {
    SchedulerKind a = SchedulerKind::RoundRobin;
    SchedulerKind b = SchedulerKind::RoundRobin;
    double se_improvement_pct = 0.0;  // (SE_a - SE_b) / SE_b * 100
    double latency_delta_ms = 0.0;    // mean latency a - b
};

struct ComparisonTable {
    std::vector<SchedulerAggregate> rows;
    std::vector<PairwiseDelta> pairwise;
};

/// Aggregates reports by scheduler (averaging across seeds) and derives
/// pairwise spectral-efficiency improvements and latency deltas. Reports
/// must share every scenario parameter except the scheduler and the seed.
inline ComparisonTable compare(std::span<const SimulationReport> reports) {
    if (reports.size() < 2)
        throw IncomparableSpecsError("need at least two reports to compare");
    ScenarioSpec base = reports.front().spec;
    for (const SimulationReport& r : reports) {
        ScenarioSpec s = r.spec;
        s.scheduler = base.scheduler;
        s.seed = base.seed;
        if (!(s == base))
            throw IncomparableSpecsError(
                "reports differ in scenario parameters other than scheduler/seed");
    }

    ComparisonTable table;
    for (int k = 0; k < 4; ++k) {
        auto kind = static_cast<SchedulerKind>(k);
        SchedulerAggregate row;
        row.scheduler = kind;
        row.n_ues = base.n_ues;
        for (const SimulationReport& r : reports) {
            if (r.spec.scheduler != kind) continue;
            ++row.runs;
            row.mean.mean_latency_ms += r.agg.mean_latency_ms;
            row.mean.latency_variance += r.agg.latency_variance;
            row.mean.p50_latency_ms += r.agg.p50_latency_ms;
            row.mean.p95_latency_ms += r.agg.p95_latency_ms;
            row.mean.p99_latency_ms += r.agg.p99_latency_ms;
            row.mean.mean_se += r.agg.mean_se;
            row.mean.mean_jain += r.agg.mean_jain;
            row.mean.latency_samples += r.agg.latency_samples;
            row.mean.total_served_bits += r.agg.total_served_bits;
            row.mean.total_rejected += r.agg.total_rejected;
        }
        if (row.runs == 0) continue;
        double n = row.runs;
        row.mean.mean_latency_ms /= n;
        row.mean.latency_variance /= n;
        row.mean.p50_latency_ms /= n;
        row.mean.p95_latency_ms /= n;
        row.mean.p99_latency_ms /= n;
        row.mean.mean_se /= n;
        row.mean.mean_jain /= n;
        table.rows.push_back(row);
    }
    for (const SchedulerAggregate& a : table.rows)
        for (const SchedulerAggregate& b : table.rows) {
            if (a.scheduler == b.scheduler) continue;
            PairwiseDelta d;
            d.a = a.scheduler;
            d.b = b.scheduler;
            d.se_improvement_pct =
                b.mean.mean_se > 0.0
                    ? (a.mean.mean_se - b.mean.mean_se) / b.mean.mean_se * 100.0
                    : 0.0;
            d.latency_delta_ms = a.mean.mean_latency_ms - b.mean.mean_latency_ms;
            table.pairwise.push_back(d);
        }
    return table;
}

}  // namespace ransim
