// SPDX-License-Identifier: Apache-2.0
//
// Disaggregated RAN node graph: two non-real-time RIC roots down through
// near-real-time RICs, CUs and DUs to the RUs that carry radio cells. The
// graph is a forest; every RU has exactly one ancestor of each higher tier.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ransim/errors.hpp"
#include "ransim/rng.hpp"

namespace ransim {

using NodeId = int;

enum class NodeKind { NonRtRic, NearRtRic, Cu, Du, Ru };

inline constexpr int kNodeKindCount = 5;

inline const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::NonRtRic: return "NonRtRic";
        case NodeKind::NearRtRic: return "NearRtRic";
        case NodeKind::Cu: return "Cu";
        case NodeKind::Du: return "Du";
        case NodeKind::Ru: return "Ru";
    }
    return "?";
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct Node {
    NodeId id = -1;
    NodeKind kind = NodeKind::Ru;
    double compute_capacity = 0.0;
    double compute_used = 0.0;
    std::optional<Vec2> position;  // present iff kind == Ru
    double height_m = 0.0;         // antenna height, meaningful for RUs
};

struct Link {
    NodeId from = -1;  // parent tier
    NodeId to = -1;    // child tier
    double one_way_latency_ms = 0.0;
};

/// Per-tier construction parameters. Counts follow the evaluation scenario
/// by default; latencies follow the non-RT / near-RT / real-time control
/// loop tiers and capacities grow toward the centre of the network.
struct TopologyConfig {
    int non_rt_rics = 2;
    int near_rt_rics = 5;
    int cus = 3;
    int dus = 8;
    int rus = 25;
    double area_side_m = 1000.0;
    double ru_height_m = 25.0;

    double latency_du_ru_ms = 0.1;
    double latency_cu_du_ms = 1.0;
    double latency_near_rt_ric_cu_ms = 2.0;
    double latency_non_rt_ric_near_rt_ric_ms = 20.0;

    double capacity_ru = 2.0;
    double capacity_du = 8.0;
    double capacity_cu = 16.0;
    double capacity_near_rt_ric = 32.0;
    double capacity_non_rt_ric = 64.0;

    bool operator==(const TopologyConfig&) const = default;
};

class Topology {
public:
    std::vector<Node> nodes;            // index == id
    std::vector<Link> links;            // one per non-root node
    std::vector<NodeId> parent;         // -1 for roots
    std::vector<double> parent_latency; // one-way ms toward parent, 0 for roots
    double area_side_m = 0.0;

    const Node& node(NodeId id) const {
        check_id(id);
        return nodes[static_cast<std::size_t>(id)];
    }

    Node& node(NodeId id) {
        check_id(id);
        return nodes[static_cast<std::size_t>(id)];
    }

    std::vector<NodeId> ids_of_kind(NodeKind k) const {
        std::vector<NodeId> out;
        for (const Node& n : nodes)
            if (n.kind == k) out.push_back(n.id);
        return out;
    }

    int count_of_kind(NodeKind k) const {
        int c = 0;
        for (const Node& n : nodes) c += n.kind == k ? 1 : 0;
        return c;
    }

    /// Closest ancestor of `id` with the given kind, or -1.
    NodeId ancestor_of_kind(NodeId id, NodeKind k) const {
        check_id(id);
        NodeId cur = id;
        while (cur >= 0) {
            if (nodes[static_cast<std::size_t>(cur)].kind == k) return cur;
            cur = parent[static_cast<std::size_t>(cur)];
        }
        return -1;
    }

    NodeId serving_du(NodeId ru) const { return ancestor_of_kind(ru, NodeKind::Du); }

private:
    void check_id(NodeId id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= nodes.size())
            throw UnknownNodeError("unknown node id " + std::to_string(id));
    }
};

/// Builds the node forest. Ids are assigned tier by tier (non-RT RICs first,
/// RUs last); children attach to parents round-robin by id, which splits them
/// as evenly as possible with the remainder on the lowest parent ids. RU
/// positions are drawn uniformly over the square deployment area.
/// Deterministic given (config, rng state).
inline Topology build_topology(const TopologyConfig& cfg, Rng rng) {
    if (cfg.non_rt_rics < 1 || cfg.near_rt_rics < 1 || cfg.cus < 1 || cfg.dus < 1 ||
        cfg.rus < 1)
        throw InvalidSpecError("every node tier needs at least one node");
    if (cfg.area_side_m <= 0.0)
        throw InvalidSpecError("area_side_m must be positive");

    Topology topo;
    topo.area_side_m = cfg.area_side_m;

    struct Tier {
        NodeKind kind;
        int count;
        double capacity;
        double link_latency_ms;  // toward parent tier; 0 for the root tier
    };
    const Tier tiers[] = {
        {NodeKind::NonRtRic, cfg.non_rt_rics, cfg.capacity_non_rt_ric, 0.0},
        {NodeKind::NearRtRic, cfg.near_rt_rics, cfg.capacity_near_rt_ric,
         cfg.latency_non_rt_ric_near_rt_ric_ms},
        {NodeKind::Cu, cfg.cus, cfg.capacity_cu, cfg.latency_near_rt_ric_cu_ms},
        {NodeKind::Du, cfg.dus, cfg.capacity_du, cfg.latency_cu_du_ms},
        {NodeKind::Ru, cfg.rus, cfg.capacity_ru, cfg.latency_du_ru_ms},
    };

    int first_of_prev_tier = 0;
    int prev_tier_count = 0;
    for (const Tier& tier : tiers) {
        int first_id = static_cast<int>(topo.nodes.size());
        for (int i = 0; i < tier.count; ++i) {
            Node n;
            n.id = first_id + i;
            n.kind = tier.kind;
            n.compute_capacity = tier.capacity;
            if (tier.kind == NodeKind::Ru) {
                n.position = Vec2{rng.uniform() * cfg.area_side_m,
                                  rng.uniform() * cfg.area_side_m};
                n.height_m = cfg.ru_height_m;
            }
            topo.nodes.push_back(n);
            if (tier.kind == NodeKind::NonRtRic) {
                topo.parent.push_back(-1);
                topo.parent_latency.push_back(0.0);
            } else {
                NodeId p = first_of_prev_tier + i % prev_tier_count;
                topo.parent.push_back(p);
                topo.parent_latency.push_back(tier.link_latency_ms);
                topo.links.push_back({p, n.id, tier.link_latency_ms});
            }
        }
        first_of_prev_tier = first_id;
        prev_tier_count = tier.count;
    }
    return topo;
}

inline double residual_capacity(const Topology& topo, NodeId id) {
    const Node& n = topo.node(id);
    return std::max(0.0, n.compute_capacity - n.compute_used);
}

/// Round-trip control latency between a hosting node and an RU in its
/// subtree: the one-way latencies on the unique tree path, doubled. Hosting
/// on the RU itself costs nothing.
inline double control_loop_latency(const Topology& topo, NodeId host, NodeId target_ru) {
    topo.node(host);
    const Node& ru = topo.node(target_ru);
    if (ru.kind != NodeKind::Ru)
        throw InvalidArgumentError("control_loop_latency target must be an RU");

    double one_way = 0.0;
    NodeId cur = target_ru;
    while (cur != host) {
        NodeId p = topo.parent[static_cast<std::size_t>(cur)];
        if (p < 0)
            throw NoPathError("node " + std::to_string(host) + " is not an ancestor of RU " +
                              std::to_string(target_ru));
        one_way += topo.parent_latency[static_cast<std::size_t>(cur)];
        cur = p;
    }
    return 2.0 * one_way;
}

}  // namespace ransim
