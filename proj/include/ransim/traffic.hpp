// SPDX-License-Identifier: Apache-2.0
//
// Workload generation: operator requests feeding the orchestrator and UE
// data sessions feeding the radio schedulers.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ransim/errors.hpp"
#include "ransim/rng.hpp"
#include "ransim/topology.hpp"

namespace ransim {

enum class Functionality {
    NetworkSlicing,
    Scheduling,
    Beamforming,
    TrafficForecasting,
    AnomalyDetection,
};

inline constexpr int kFunctionalityCount = 5;

inline const char* to_string(Functionality f) {
    switch (f) {
        case Functionality::NetworkSlicing: return "NetworkSlicing";
        case Functionality::Scheduling: return "Scheduling";
        case Functionality::Beamforming: return "Beamforming";
        case Functionality::TrafficForecasting: return "TrafficForecasting";
        case Functionality::AnomalyDetection: return "AnomalyDetection";
    }
    return "?";
}

/// Service classes and their control loop bounds.
enum class LatencyClass { RealTime, NearRealTime, NonRealTime };

inline double loop_bound_ms(LatencyClass c) {
    switch (c) {
        case LatencyClass::RealTime: return 10.0;
        case LatencyClass::NearRealTime: return 1000.0;
        case LatencyClass::NonRealTime: return 60000.0;
    }
    return 0.0;
}

inline const char* to_string(LatencyClass c) {
    switch (c) {
        case LatencyClass::RealTime: return "RealTime";
        case LatencyClass::NearRealTime: return "NearRealTime";
        case LatencyClass::NonRealTime: return "NonRealTime";
    }
    return "?";
}

using RequestId = std::int64_t;

struct OperatorRequest {
    RequestId id = 0;
    Functionality functionality = Functionality::Scheduling;
    LatencyClass latency_class = LatencyClass::RealTime;
    std::optional<NodeKind> location_constraint;
    std::vector<NodeId> target_rus;  // non-empty, sorted
    int arrival_slot = 0;
    std::int64_t payload_bits = 0;
};

using UeId = int;

struct UeSession {
    UeId ue_id = 0;
    Vec2 position;
    NodeId serving_ru = -1;
    std::int64_t backlog_bits = 0;
    double arrival_rate_bps = 0.0;
};

struct TrafficConfig {
    // Request mix over functionalities; must sum to 1.
    double mix_scheduling = 0.40;
    double mix_beamforming = 0.30;
    double mix_network_slicing = 0.15;
    double mix_traffic_forecasting = 0.10;
    double mix_anomaly_detection = 0.05;

    double arrival_rate_mbps = 20.0;  // mean offered rate per UE
    std::int64_t packet_bits = 12000;

    bool operator==(const TrafficConfig&) const = default;
};

/// Draws exactly `load` requests for one slot. Functionality follows the
/// configured mix; the latency class is implied by the functionality
/// (scheduling/beamforming split evenly between real-time and near-real-time,
/// slicing is near-real-time, forecasting and anomaly detection are
/// non-real-time). Control-plane functionalities target a single RU, the
/// rest target a whole DU's RU set.
inline std::vector<OperatorRequest> generate_requests(const Topology& topo,
                                                      const TrafficConfig& cfg, Rng& rng,
                                                      int slot, int load) {
    if (load < 0) throw InvalidArgumentError("request load must be >= 0");
    std::vector<NodeId> rus = topo.ids_of_kind(NodeKind::Ru);
    std::vector<NodeId> dus = topo.ids_of_kind(NodeKind::Du);
    std::vector<std::vector<NodeId>> du_rus(dus.size());
    for (NodeId ru : rus)
        for (std::size_t d = 0; d < dus.size(); ++d)
            if (topo.serving_du(ru) == dus[d]) du_rus[d].push_back(ru);

    const double cum[4] = {
        cfg.mix_scheduling,
        cfg.mix_scheduling + cfg.mix_beamforming,
        cfg.mix_scheduling + cfg.mix_beamforming + cfg.mix_network_slicing,
        cfg.mix_scheduling + cfg.mix_beamforming + cfg.mix_network_slicing +
            cfg.mix_traffic_forecasting,
    };

    std::vector<OperatorRequest> out;
    out.reserve(static_cast<std::size_t>(load));
    for (int i = 0; i < load; ++i) {
        OperatorRequest req;
        req.id = static_cast<RequestId>(slot) * 1000000 + i;
        req.arrival_slot = slot;
        double u = rng.uniform();
        if (u < cum[0]) req.functionality = Functionality::Scheduling;
        else if (u < cum[1]) req.functionality = Functionality::Beamforming;
        else if (u < cum[2]) req.functionality = Functionality::NetworkSlicing;
        else if (u < cum[3]) req.functionality = Functionality::TrafficForecasting;
        else req.functionality = Functionality::AnomalyDetection;

        switch (req.functionality) {
            case Functionality::Scheduling:
            case Functionality::Beamforming:
                req.latency_class = rng.bernoulli(0.5) ? LatencyClass::RealTime
                                                       : LatencyClass::NearRealTime;
                req.target_rus = {rus[rng.uniform_int(rus.size())]};
                break;
            case Functionality::NetworkSlicing:
                req.latency_class = LatencyClass::NearRealTime;
                req.target_rus = du_rus[rng.uniform_int(dus.size())];
                break;
            case Functionality::TrafficForecasting:
            case Functionality::AnomalyDetection:
                req.latency_class = LatencyClass::NonRealTime;
                req.target_rus = du_rus[rng.uniform_int(dus.size())];
                break;
        }
        out.push_back(std::move(req));
    }
    return out;
}

/// Spawns UE sessions uniformly over the deployment area. Each attaches to
/// the horizontally nearest RU (ties to the lowest RU id) and starts with an
/// empty backlog.
inline std::vector<UeSession> spawn_ues(const Topology& topo, const TrafficConfig& cfg,
                                        Rng& rng, int n_ues) {
    if (n_ues < 0) throw InvalidArgumentError("n_ues must be >= 0");
    std::vector<NodeId> rus = topo.ids_of_kind(NodeKind::Ru);
    std::vector<UeSession> out;
    out.reserve(static_cast<std::size_t>(n_ues));
    for (int i = 0; i < n_ues; ++i) {
        UeSession ue;
        ue.ue_id = i;
        ue.position = {rng.uniform() * topo.area_side_m, rng.uniform() * topo.area_side_m};
        double best = -1.0;
        for (NodeId ru : rus) {
            double d = distance(ue.position, *topo.node(ru).position);
            if (best < 0.0 || d < best) {
                best = d;
                ue.serving_ru = ru;
            }
        }
        ue.arrival_rate_bps = cfg.arrival_rate_mbps * 1e6;
        out.push_back(ue);
    }
    return out;
}

/// Adds one slot's worth of Poisson packet arrivals to a session's backlog.
/// Returns the number of packets that arrived so callers can stamp them.
inline int accumulate_arrivals(UeSession& session, const TrafficConfig& cfg, Rng& rng,
                               double slot_duration_ms) {
    if (slot_duration_ms <= 0.0)
        throw InvalidArgumentError("slot duration must be positive");
    if (session.arrival_rate_bps <= 0.0) return 0;
    double mean_packets = session.arrival_rate_bps * (slot_duration_ms / 1000.0) /
                          static_cast<double>(cfg.packet_bits);
    int n = static_cast<int>(rng.poisson(mean_packets));
    session.backlog_bits += static_cast<std::int64_t>(n) * cfg.packet_bits;
    return n;
}

}  // namespace ransim
