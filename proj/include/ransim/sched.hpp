// SPDX-License-Identifier: Apache-2.0
//
// Per-cell PRB allocation. Four policies: round robin, proportional fair,
// max-min fairness, and an adaptive agent that learns to switch between
// allocator presets per load/quality state.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ransim/errors.hpp"
#include "ransim/rng.hpp"
#include "ransim/traffic.hpp"

namespace ransim {

struct Allocation {
    std::map<UeId, int> prbs;
    int total_prbs = 0;

    int allocated() const {
        int sum = 0;
        for (const auto& [id, n] : prbs) sum += n;
        return sum;
    }
};

// ---------------------------------------------------------------------------
// Round robin
// ---------------------------------------------------------------------------

struct RrState {
    std::size_t cursor = 0;
};

/// Deals PRBs one at a time, cycling over the backlogged UEs starting at the
/// cursor; the cursor moves to the UE after the last one served. An empty
/// set or zero PRBs leaves the cursor alone.
inline std::pair<Allocation, RrState> schedule_rr(RrState state,
                                                  std::span<const UeId> backlogged,
                                                  int prbs) {
    if (prbs < 0) throw InvalidArgumentError("prb count must be >= 0");
    Allocation alloc;
    alloc.total_prbs = prbs;
    if (backlogged.empty() || prbs == 0) return {alloc, state};

    std::size_t n = backlogged.size();
    std::size_t pos = state.cursor % n;
    int base = prbs / static_cast<int>(n);
    int extra = prbs % static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        // UEs within `extra` steps of the cursor get the remainder PRB.
        int share = base + (static_cast<int>((i + n - pos) % n) < extra ? 1 : 0);
        if (share > 0) alloc.prbs[backlogged[i]] = share;
    }
    state.cursor = (pos + static_cast<std::size_t>(prbs)) % n;
    return {alloc, state};
}

// ---------------------------------------------------------------------------
// Proportional fair
// ---------------------------------------------------------------------------

struct PfState {
    std::map<UeId, double> avg_throughput_bps;  // EWMA, floored at epsilon
    double time_constant_slots = 100.0;

    static constexpr double kEpsilonBps = 1.0;

    void track(UeId id) { avg_throughput_bps.try_emplace(id, kEpsilonBps); }
};

struct PfUe {
    UeId id = 0;
    double rate_per_prb_bps = 0.0;  // achievable on one PRB this slot
    double metric_boost = 1.0;      // multiplier, 1 for plain PF
};

/// Greedy per-PRB proportional fair. Each PRB goes to the UE maximising
/// rate over EWMA throughput, where the denominator is the EWMA the UE
/// would have after this slot given what it has been granted so far:
/// (1 - 1/tc) avg + (1/tc) granted * rate. That forecast keeps equal-metric
/// UEs alternating instead of one capturing the whole slot. Ties go to the
/// lowest id. The stored averages are not modified; call update_pf after
/// serving.
inline Allocation schedule_pf(const PfState& state, std::span<const PfUe> ues, int prbs) {
    if (prbs < 0) throw InvalidArgumentError("prb count must be >= 0");
    Allocation alloc;
    alloc.total_prbs = prbs;
    if (ues.empty()) return alloc;

    std::vector<double> avg(ues.size(), PfState::kEpsilonBps);
    std::vector<int> granted(ues.size(), 0);
    for (std::size_t i = 0; i < ues.size(); ++i) {
        auto it = state.avg_throughput_bps.find(ues[i].id);
        if (it != state.avg_throughput_bps.end()) avg[i] = it->second;
    }
    double decay = 1.0 - 1.0 / state.time_constant_slots;
    double gain = 1.0 / state.time_constant_slots;

    for (int p = 0; p < prbs; ++p) {
        std::size_t best = 0;
        double best_metric = -1.0;
        for (std::size_t i = 0; i < ues.size(); ++i) {
            double forecast = decay * avg[i] + gain * granted[i] * ues[i].rate_per_prb_bps;
            double metric = ues[i].rate_per_prb_bps / forecast * ues[i].metric_boost;
            if (metric > best_metric ||
                (metric == best_metric && ues[i].id < ues[best].id)) {
                best_metric = metric;
                best = i;
            }
        }
        ++granted[best];
    }
    for (std::size_t i = 0; i < ues.size(); ++i)
        if (granted[i] > 0) alloc.prbs[ues[i].id] = granted[i];
    return alloc;
}

/// Post-slot EWMA update, applied to every tracked UE (unserved ones decay
/// toward zero but stay positive thanks to the epsilon floor at first sight).
inline void update_pf(PfState& state, const std::vector<std::pair<UeId, std::int64_t>>& served_bits,
                      double slot_duration_ms) {
    if (slot_duration_ms <= 0.0)
        throw InvalidArgumentError("slot duration must be positive");
    std::map<UeId, std::int64_t> served(served_bits.begin(), served_bits.end());
    double decay = 1.0 - 1.0 / state.time_constant_slots;
    double gain = 1.0 / state.time_constant_slots;
    for (auto& [id, avg] : state.avg_throughput_bps) {
        auto it = served.find(id);
        double rate = it == served.end()
                          ? 0.0
                          : static_cast<double>(it->second) / (slot_duration_ms / 1000.0);
        avg = decay * avg + gain * rate;
    }
}

// ---------------------------------------------------------------------------
// Max-min fairness
// ---------------------------------------------------------------------------

struct MmUe {
    UeId id = 0;
    double bits_per_prb = 0.0;      // deliverable bits per PRB this slot; > 0
    std::int64_t backlog_bits = 0;  // demand cap
};

/// Integer progressive filling: each PRB goes to the UE with the smallest
/// provisional throughput (granted PRBs times per-PRB rate), skipping UEs
/// whose backlog is already covered. Stops when PRBs or demand run out.
inline Allocation schedule_maxmin(std::span<const MmUe> ues, int prbs) {
    if (prbs < 0) throw InvalidArgumentError("prb count must be >= 0");
    Allocation alloc;
    alloc.total_prbs = prbs;
    std::vector<int> granted(ues.size(), 0);
    for (int p = 0; p < prbs; ++p) {
        std::size_t best = ues.size();
        double best_throughput = 0.0;
        for (std::size_t i = 0; i < ues.size(); ++i) {
            if (ues[i].bits_per_prb <= 0.0) continue;
            double got = granted[i] * ues[i].bits_per_prb;
            if (got >= static_cast<double>(ues[i].backlog_bits)) continue;  // satisfied
            if (best == ues.size() || got < best_throughput ||
                (got == best_throughput && ues[i].id < ues[best].id)) {
                best = i;
                best_throughput = got;
            }
        }
        if (best == ues.size()) break;  // all demand met
        ++granted[best];
    }
    for (std::size_t i = 0; i < ues.size(); ++i)
        if (granted[i] > 0) alloc.prbs[ues[i].id] = granted[i];
    return alloc;
}

// ---------------------------------------------------------------------------
// Throughput-greedy preset (used by the adaptive agent)
// ---------------------------------------------------------------------------

struct GreedyUe {
    UeId id = 0;
    double bits_per_prb = 0.0;
    std::int64_t backlog_bits = 0;
};

/// Best-rate-first: PRBs go to the highest-rate UE until its backlog is
/// covered, then the next. Ties to the lowest id.
inline Allocation schedule_greedy(std::span<const GreedyUe> ues, int prbs) {
    if (prbs < 0) throw InvalidArgumentError("prb count must be >= 0");
    Allocation alloc;
    alloc.total_prbs = prbs;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < ues.size(); ++i)
        if (ues[i].bits_per_prb > 0.0) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ues[a].bits_per_prb != ues[b].bits_per_prb)
            return ues[a].bits_per_prb > ues[b].bits_per_prb;
        return ues[a].id < ues[b].id;
    });
    int left = prbs;
    for (std::size_t i : order) {
        if (left == 0) break;
        auto need = static_cast<int>(
            std::ceil(static_cast<double>(ues[i].backlog_bits) / ues[i].bits_per_prb));
        int give = std::min(left, need);
        if (give > 0) {
            alloc.prbs[ues[i].id] = give;
            left -= give;
        }
    }
    return alloc;
}

// ---------------------------------------------------------------------------
// Adaptive agent (tabular Q-learning over load/quality buckets)
// ---------------------------------------------------------------------------

enum class SchedAction { PurePf, PfLatencyBoost, MaxMinBlend, ThroughputGreedy };

inline constexpr int kSchedActionCount = 4;

inline const char* to_string(SchedAction a) {
    switch (a) {
        case SchedAction::PurePf: return "PurePf";
        case SchedAction::PfLatencyBoost: return "PfLatencyBoost";
        case SchedAction::MaxMinBlend: return "MaxMinBlend";
        case SchedAction::ThroughputGreedy: return "ThroughputGreedy";
    }
    return "?";
}

/// Quantised cell state: mean backlogged UEs per cell and mean spectral
/// efficiency of the backlogged UEs. 4 x 4 = 16 composite buckets.
struct Observation {
    int load_bucket = 0;  // 0: 0-2, 1: 3-5, 2: 6-10, 3: 11+
    int cqi_bucket = 0;   // 0: <1, 1: 1-3, 2: 3-6, 3: >=6 bit/s/Hz

    int index() const { return load_bucket * 4 + cqi_bucket; }

    static Observation from(double backlogged_per_cell, double mean_se) {
        Observation o;
        if (backlogged_per_cell <= 2.0) o.load_bucket = 0;
        else if (backlogged_per_cell <= 5.0) o.load_bucket = 1;
        else if (backlogged_per_cell <= 10.0) o.load_bucket = 2;
        else o.load_bucket = 3;
        if (mean_se < 1.0) o.cqi_bucket = 0;
        else if (mean_se < 3.0) o.cqi_bucket = 1;
        else if (mean_se < 6.0) o.cqi_bucket = 2;
        else o.cqi_bucket = 3;
        return o;
    }
};

inline constexpr int kObservationCount = 16;

struct AgentState {
    std::array<std::array<double, kSchedActionCount>, kObservationCount> q_table{};
    double epsilon = 0.3;
    double alpha = 0.1;
    double gamma = 0.9;
    double w_se = 1.0;
    double w_lat = 1.0;
};

/// Exploration schedule: exponential decay from `start` to `end` over
/// `decay_slots`, flat afterwards.
inline double epsilon_at(int slot, double start, double end, int decay_slots) {
    if (slot >= decay_slots || start <= end) return end;
    return start * std::pow(end / start, static_cast<double>(slot) / decay_slots);
}

/// Epsilon-greedy action selection; greedy ties resolve to the lowest action
/// index so replay stays exact.
inline SchedAction act(const AgentState& agent, const Observation& obs, Rng& rng) {
    if (rng.uniform() < agent.epsilon)
        return static_cast<SchedAction>(rng.uniform_int(kSchedActionCount));
    const auto& row = agent.q_table[static_cast<std::size_t>(obs.index())];
    int best = 0;
    for (int a = 1; a < kSchedActionCount; ++a)
        if (row[static_cast<std::size_t>(a)] > row[static_cast<std::size_t>(best)]) best = a;
    return static_cast<SchedAction>(best);
}

/// One-step Q-learning update.
inline void learn(AgentState& agent, const Observation& obs, SchedAction action,
                  double reward, const Observation& next_obs) {
    if (!std::isfinite(reward)) throw NonFiniteRewardError("reward is not finite");
    const auto& next_row = agent.q_table[static_cast<std::size_t>(next_obs.index())];
    double best_next = next_row[0];
    for (int a = 1; a < kSchedActionCount; ++a)
        best_next = std::max(best_next, next_row[static_cast<std::size_t>(a)]);
    double& q = agent.q_table[static_cast<std::size_t>(obs.index())]
                             [static_cast<std::size_t>(action)];
    q += agent.alpha * (reward + agent.gamma * best_next - q);
}

}  // namespace ransim
