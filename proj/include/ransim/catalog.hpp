// SPDX-License-Identifier: Apache-2.0
//
// The ML/AI catalog: descriptors of pre-trained models the orchestrator can
// deploy. Entries are capability records (what a model does, what it costs,
// where it may run), not executable models.
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "ransim/errors.hpp"
#include "ransim/traffic.hpp"

namespace ransim {

enum class ModelKind {
    ReinforcementLearning,
    FederatedLearning,
    DeepLearningOptimizer,
    GraphNeuralNetwork,
    TransformerForecaster,
};

inline const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::ReinforcementLearning: return "ReinforcementLearning";
        case ModelKind::FederatedLearning: return "FederatedLearning";
        case ModelKind::DeepLearningOptimizer: return "DeepLearningOptimizer";
        case ModelKind::GraphNeuralNetwork: return "GraphNeuralNetwork";
        case ModelKind::TransformerForecaster: return "TransformerForecaster";
    }
    return "?";
}

struct ModelDescriptor {
    std::string id;
    ModelKind kind = ModelKind::ReinforcementLearning;
    std::set<Functionality> functionalities;  // non-empty
    double compute_cost = 1.0;                // > 0
    double inference_latency_ms = 1.0;        // > 0
    std::set<NodeKind> allowed_hosts;         // non-empty

    bool operator==(const ModelDescriptor&) const = default;
};

class Catalog {
public:
    Catalog() = default;

    explicit Catalog(std::vector<ModelDescriptor> entries) {
        for (auto& e : entries) add(std::move(e));
    }

    void add(ModelDescriptor entry) {
        if (entry.id.empty()) throw InvalidValueError("catalog entry id must be non-empty");
        if (entry.functionalities.empty())
            throw InvalidValueError("catalog entry " + entry.id + " has no functionalities");
        if (entry.allowed_hosts.empty())
            throw InvalidValueError("catalog entry " + entry.id + " has no allowed hosts");
        if (entry.compute_cost <= 0.0 || entry.inference_latency_ms <= 0.0)
            throw InvalidValueError("catalog entry " + entry.id +
                                    " needs positive cost and latency");
        if (find(entry.id) != nullptr)
            throw InvalidValueError("duplicate catalog entry id " + entry.id);
        entries_.push_back(std::move(entry));
    }

    const std::vector<ModelDescriptor>& entries() const { return entries_; }

    const ModelDescriptor* find(const std::string& id) const {
        for (const auto& e : entries_)
            if (e.id == id) return &e;
        return nullptr;
    }

    bool operator==(const Catalog&) const = default;

private:
    std::vector<ModelDescriptor> entries_;
};

/// The stock catalog: one entry per model family.
inline Catalog default_catalog() {
    Catalog c;
    c.add({"rl", ModelKind::ReinforcementLearning,
           {Functionality::Scheduling, Functionality::Beamforming}, 2.0, 0.5,
           {NodeKind::Du, NodeKind::NearRtRic}});
    c.add({"fl", ModelKind::FederatedLearning, {Functionality::AnomalyDetection}, 4.0, 50.0,
           {NodeKind::NearRtRic, NodeKind::NonRtRic}});
    c.add({"dlopt", ModelKind::DeepLearningOptimizer, {Functionality::Beamforming}, 3.0, 1.0,
           {NodeKind::Du}});
    c.add({"gnn", ModelKind::GraphNeuralNetwork, {Functionality::NetworkSlicing}, 6.0, 100.0,
           {NodeKind::NearRtRic}});
    c.add({"transformer", ModelKind::TransformerForecaster,
           {Functionality::TrafficForecasting}, 8.0, 500.0, {NodeKind::NonRtRic}});
    return c;
}

/// Entries able to serve `functionality` within the class's loop bound,
/// sorted by (compute cost, id).
inline std::vector<ModelDescriptor> candidates(const Catalog& catalog,
                                               Functionality functionality,
                                               LatencyClass latency_class) {
    std::vector<ModelDescriptor> out;
    for (const auto& e : catalog.entries())
        if (e.functionalities.contains(functionality) &&
            e.inference_latency_ms <= loop_bound_ms(latency_class))
            out.push_back(e);
    std::sort(out.begin(), out.end(), [](const ModelDescriptor& a, const ModelDescriptor& b) {
        if (a.compute_cost != b.compute_cost) return a.compute_cost < b.compute_cost;
        return a.id < b.id;
    });
    return out;
}

}  // namespace ransim
