// SPDX-License-Identifier: Apache-2.0
//
// The orchestration engine: matches operator requests to catalog models,
// places them on infrastructure nodes under latency and compute constraints,
// and emits deployment plans plus feedback policies.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ransim/catalog.hpp"
#include "ransim/errors.hpp"
#include "ransim/topology.hpp"
#include "ransim/traffic.hpp"

namespace ransim {

enum class AppType { DApp, XApp, RApp };

inline const char* to_string(AppType t) {
    switch (t) {
        case AppType::DApp: return "dApp";
        case AppType::XApp: return "xApp";
        case AppType::RApp: return "rApp";
    }
    return "?";
}

enum class DispatchInterface { E2, A1, O1 };

inline const char* to_string(DispatchInterface i) {
    switch (i) {
        case DispatchInterface::E2: return "E2";
        case DispatchInterface::A1: return "A1";
        case DispatchInterface::O1: return "O1";
    }
    return "?";
}

/// App taxonomy by hosting tier. CUs host no apps.
inline AppType app_type_for(NodeKind host_kind) {
    switch (host_kind) {
        case NodeKind::Ru:
        case NodeKind::Du: return AppType::DApp;
        case NodeKind::NearRtRic: return AppType::XApp;
        case NodeKind::NonRtRic: return AppType::RApp;
        case NodeKind::Cu: break;
    }
    throw UnsupportedHostError("CUs do not host applications");
}

/// Dispatch channel label per app type: dApps are driven over E2, xApps take
/// policy over A1, rApps are managed over O1. Labels only; nothing is encoded.
inline DispatchInterface dispatch_interface_for(AppType t) {
    switch (t) {
        case AppType::DApp: return DispatchInterface::E2;
        case AppType::XApp: return DispatchInterface::A1;
        case AppType::RApp: return DispatchInterface::O1;
    }
    return DispatchInterface::O1;
}

struct Deployment {
    RequestId request_id = 0;
    std::string model_id;
    NodeId host = -1;
    AppType app_type = AppType::DApp;
    DispatchInterface dispatch_interface = DispatchInterface::E2;
    double control_latency_ms = 0.0;  // round trip to the farthest target RU
    double compute_cost = 0.0;
    Functionality functionality = Functionality::Scheduling;
    LatencyClass latency_class = LatencyClass::RealTime;
    std::vector<NodeId> target_rus;
};

enum class RejectReason { NoModel, NoCapacity, LatencyInfeasible };

inline const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::NoModel: return "NoModel";
        case RejectReason::NoCapacity: return "NoCapacity";
        case RejectReason::LatencyInfeasible: return "LatencyInfeasible";
    }
    return "?";
}

struct Rejection {
    RequestId request_id = 0;
    RejectReason reason = RejectReason::NoModel;
};

struct DeploymentPlan {
    std::vector<Deployment> accepted;
    std::vector<Rejection> rejected;
    bool applied = false;
};

/// Greedy placement. Requests are served strictest latency class first (ties
/// keep arrival order); for each request every catalog candidate is paired
/// with the feasible hosts — nodes on the common serving path of all target
/// RUs, restricted to the model's allowed tiers, any location constraint,
/// and remaining compute — and the pair minimising control-loop plus
/// inference latency wins, provided the total fits the class loop bound.
/// Ties go to the lowest host id, then catalog order. Commitments reduce the
/// capacity visible to later requests; nothing mutates the topology here.
inline DeploymentPlan plan(const std::vector<OperatorRequest>& requests,
                           const Catalog& catalog, const Topology& topo) {
    std::vector<double> provisional_used(topo.nodes.size());
    for (const Node& n : topo.nodes)
        provisional_used[static_cast<std::size_t>(n.id)] = n.compute_used;

    std::vector<std::size_t> order(requests.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return static_cast<int>(requests[a].latency_class) <
               static_cast<int>(requests[b].latency_class);
    });

    DeploymentPlan out;
    for (std::size_t idx : order) {
        const OperatorRequest& req = requests[idx];
        if (req.target_rus.empty())
            throw InvalidArgumentError("request " + std::to_string(req.id) +
                                       " has no target RUs");

        // Nodes on the path serving every target RU: intersection of each
        // RU's ancestor chain (the RU itself counts when it is the only one).
        std::vector<NodeId> common;
        for (NodeId cur = req.target_rus.front(); cur >= 0;
             cur = topo.parent[static_cast<std::size_t>(cur)])
            common.push_back(cur);
        for (std::size_t t = 1; t < req.target_rus.size(); ++t) {
            std::vector<NodeId> chain;
            for (NodeId cur = req.target_rus[t]; cur >= 0;
                 cur = topo.parent[static_cast<std::size_t>(cur)])
                chain.push_back(cur);
            std::erase_if(common, [&](NodeId id) {
                return std::find(chain.begin(), chain.end(), id) == chain.end();
            });
        }
        std::sort(common.begin(), common.end());

        auto models = candidates(catalog, req.functionality, req.latency_class);

        // Track how far any candidate got, for the rejection reason.
        bool saw_structural = false;
        bool saw_capacity = false;
        const ModelDescriptor* best_model = nullptr;
        NodeId best_host = -1;
        double best_total = std::numeric_limits<double>::infinity();
        double best_control = 0.0;

        for (const ModelDescriptor& model : models) {
            for (NodeId host : common) {
                NodeKind kind = topo.node(host).kind;
                if (kind == NodeKind::Cu) continue;  // CUs host nothing
                if (!model.allowed_hosts.contains(kind)) continue;
                if (req.location_constraint && kind != *req.location_constraint) continue;
                saw_structural = true;
                double capacity = topo.node(host).compute_capacity -
                                  provisional_used[static_cast<std::size_t>(host)];
                if (capacity < model.compute_cost) continue;
                saw_capacity = true;
                double control = 0.0;
                for (NodeId ru : req.target_rus)
                    control = std::max(control, control_loop_latency(topo, host, ru));
                double total = control + model.inference_latency_ms;
                if (total > loop_bound_ms(req.latency_class)) continue;
                if (total < best_total || (total == best_total && host < best_host)) {
                    best_total = total;
                    best_model = &model;
                    best_host = host;
                    best_control = control;
                }
            }
        }

        if (best_model == nullptr) {
            RejectReason reason = RejectReason::NoModel;
            if (saw_capacity) reason = RejectReason::LatencyInfeasible;
            else if (saw_structural) reason = RejectReason::NoCapacity;
            out.rejected.push_back({req.id, reason});
            continue;
        }

        provisional_used[static_cast<std::size_t>(best_host)] += best_model->compute_cost;
        Deployment dep;
        dep.request_id = req.id;
        dep.model_id = best_model->id;
        dep.host = best_host;
        dep.app_type = app_type_for(topo.node(best_host).kind);
        dep.dispatch_interface = dispatch_interface_for(dep.app_type);
        dep.control_latency_ms = best_control;
        dep.compute_cost = best_model->compute_cost;
        dep.functionality = req.functionality;
        dep.latency_class = req.latency_class;
        dep.target_rus = req.target_rus;
        out.accepted.push_back(std::move(dep));
    }
    return out;
}

/// Commits a plan's compute usage to the topology. A plan may be applied
/// once; re-applying is an error, and exceeding any node's capacity means the
/// plan was computed against a different topology state.
inline void apply_plan(Topology& topo, DeploymentPlan& plan) {
    if (plan.applied) throw DoubleApplyError("deployment plan already applied");
    for (const Deployment& d : plan.accepted) {
        Node& n = topo.node(d.host);
        if (n.compute_used + d.compute_cost > n.compute_capacity)
            throw CapacityViolationError("deployment " + std::to_string(d.request_id) +
                                         " exceeds capacity of node " +
                                         std::to_string(d.host));
    }
    for (const Deployment& d : plan.accepted) topo.node(d.host).compute_used += d.compute_cost;
    plan.applied = true;
}

struct PolicyEntry {
    RequestId request_id = 0;
    std::int64_t cadence_slots = 1;  // >= 1
    std::vector<std::string> metrics;
    bool retrain = false;
};

struct OrchestrationPolicy {
    std::vector<PolicyEntry> entries;
};

/// Feedback policy per deployment: reinforcement learning apps report every
/// slot and keep training; everything else reports at its inference cadence.
inline OrchestrationPolicy policy_for(const DeploymentPlan& plan, const Catalog& catalog,
                                      double slot_duration_ms) {
    OrchestrationPolicy out;
    for (const Deployment& d : plan.accepted) {
        const ModelDescriptor* model = catalog.find(d.model_id);
        if (model == nullptr)
            throw InvalidArgumentError("deployment references unknown model " + d.model_id);
        PolicyEntry e;
        e.request_id = d.request_id;
        if (model->kind == ModelKind::ReinforcementLearning) {
            e.cadence_slots = 1;
            e.metrics = {"sinr", "queue_length", "reward"};
            e.retrain = true;
        } else {
            e.cadence_slots = std::max<std::int64_t>(
                1, static_cast<std::int64_t>(
                       std::ceil(model->inference_latency_ms / slot_duration_ms)));
            e.metrics = {"mean_se", "p95_latency_ms"};
            e.retrain = false;
        }
        out.entries.push_back(std::move(e));
    }
    return out;
}

}  // namespace ransim
