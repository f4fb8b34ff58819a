// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration: a JSON document whose absent keys fall back to the
// stock evaluation scenario and whose unknown keys are hard errors. The
// effective spec serialises back to JSON and re-parses to an identical spec,
// which is how every output file embeds its provenance.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ransim/catalog.hpp"
#include "ransim/channel.hpp"
#include "ransim/errors.hpp"
#include "ransim/topology.hpp"
#include "ransim/traffic.hpp"

namespace ransim {

using Json = nlohmann::ordered_json;

enum class SchedulerKind { RoundRobin, ProportionalFair, MaxMinFairness, OrchestRAN };

inline const char* to_string(SchedulerKind s) {
    switch (s) {
        case SchedulerKind::RoundRobin: return "RoundRobin";
        case SchedulerKind::ProportionalFair: return "ProportionalFair";
        case SchedulerKind::MaxMinFairness: return "MaxMinFairness";
        case SchedulerKind::OrchestRAN: return "OrchestRAN";
    }
    return "?";
}

/// Accepted scheduler names, matched case-insensitively with '-' and '_'
/// stripped: RoundRobin | rr, ProportionalFair | pf, MaxMinFairness |
/// maxmin | mm, OrchestRAN | rl | adaptive.
inline SchedulerKind parse_scheduler(const std::string& name) {
    std::string k;
    for (char c : name)
        if (c != '_' && c != '-') k.push_back(static_cast<char>(std::tolower(c)));
    if (k == "roundrobin" || k == "rr") return SchedulerKind::RoundRobin;
    if (k == "proportionalfair" || k == "pf") return SchedulerKind::ProportionalFair;
    if (k == "maxminfairness" || k == "maxmin" || k == "mm")
        return SchedulerKind::MaxMinFairness;
    if (k == "orchestran" || k == "rl" || k == "adaptive") return SchedulerKind::OrchestRAN;
    throw InvalidValueError("unknown scheduler '" + name + "'");
}

struct PfConfig {
    double time_constant_slots = 100.0;

    bool operator==(const PfConfig&) const = default;
};

struct RlConfig {
    double alpha = 0.1;
    double gamma = 0.9;
    double epsilon_start = 0.3;
    double epsilon_end = 0.01;
    int epsilon_decay_slots = 5000;
    double w_se = 1.0;
    double w_lat = 1.0;
    double beam_boost_db = 3.0;
    // Delay scale for the reward and the latency-boost preset: the
    // near-real-time class loop bound.
    double delay_norm_ms = 1000.0;

    bool operator==(const RlConfig&) const = default;
};

struct ScenarioSpec {
    std::uint64_t seed = 1;
    int n_slots = 2000;
    double slot_duration_ms = 1.0;
    SchedulerKind scheduler = SchedulerKind::RoundRobin;
    int requests_per_slot = 100;
    int n_ues = 200;
    int orchestration_epoch_slots = 100;
    int measure_start_slot = 5000;  // ignored (treated as 0) when >= n_slots
    bool record_per_ue = false;
    TopologyConfig topology;
    RadioConfig radio;
    TrafficConfig traffic;
    PfConfig pf;
    RlConfig rl;
    std::optional<std::vector<ModelDescriptor>> catalog_override;

    bool operator==(const ScenarioSpec&) const = default;

    Catalog make_catalog() const {
        return catalog_override ? Catalog(*catalog_override) : default_catalog();
    }

    int effective_measure_start() const {
        return measure_start_slot < n_slots ? measure_start_slot : 0;
    }
};

/// Structural checks that gate a run (parse-level range checks live in
/// parse_config).
inline void validate_spec(const ScenarioSpec& spec) {
    const TopologyConfig& t = spec.topology;
    if (t.non_rt_rics < 1 || t.near_rt_rics < 1 || t.cus < 1 || t.dus < 1 || t.rus < 1)
        throw InvalidSpecError("every node tier needs at least one node");
    if (t.area_side_m <= 0.0) throw InvalidSpecError("area_side_m must be positive");
    if (spec.n_slots < 1) throw InvalidSpecError("n_slots must be >= 1");
}

namespace detail {

inline void check_keys(const Json& obj, const std::vector<std::string>& known,
                       const std::string& path) {
    for (const auto& [key, _] : obj.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw UnknownKeyError("unknown key '" + (path.empty() ? key : path + "." + key) +
                                  "'");
}

template <typename T>
void read(const Json& obj, const std::string& key, const std::string& path, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidValueError("bad value for '" + (path.empty() ? key : path + "." + key) +
                                "'");
    }
}

inline void require(bool ok, const std::string& path, const std::string& why) {
    if (!ok) throw InvalidValueError("invalid value for '" + path + "': " + why);
}

inline Functionality parse_functionality(const std::string& s, const std::string& path) {
    for (int i = 0; i < kFunctionalityCount; ++i)
        if (s == to_string(static_cast<Functionality>(i)))
            return static_cast<Functionality>(i);
    throw InvalidValueError("invalid value for '" + path + "': unknown functionality '" + s +
                            "'");
}

inline NodeKind parse_node_kind(const std::string& s, const std::string& path) {
    for (int i = 0; i < kNodeKindCount; ++i)
        if (s == to_string(static_cast<NodeKind>(i))) return static_cast<NodeKind>(i);
    throw InvalidValueError("invalid value for '" + path + "': unknown node kind '" + s + "'");
}

inline ModelKind parse_model_kind(const std::string& s, const std::string& path) {
    for (int i = 0; i < 5; ++i)
        if (s == to_string(static_cast<ModelKind>(i))) return static_cast<ModelKind>(i);
    throw InvalidValueError("invalid value for '" + path + "': unknown model kind '" + s +
                            "'");
}

inline void parse_topology(const Json& obj, TopologyConfig& t) {
    check_keys(obj, {"non_rt_rics", "near_rt_rics", "cus", "dus", "rus", "area_side_m",
                     "ru_height_m", "link_latency_ms", "compute_capacity"},
               "topology");
    read(obj, "non_rt_rics", "topology", t.non_rt_rics);
    read(obj, "near_rt_rics", "topology", t.near_rt_rics);
    read(obj, "cus", "topology", t.cus);
    read(obj, "dus", "topology", t.dus);
    read(obj, "rus", "topology", t.rus);
    read(obj, "area_side_m", "topology", t.area_side_m);
    read(obj, "ru_height_m", "topology", t.ru_height_m);
    require(t.non_rt_rics >= 0 && t.near_rt_rics >= 0 && t.cus >= 0 && t.dus >= 0 &&
                t.rus >= 0,
            "topology", "node counts must be >= 0");
    require(t.ru_height_m > 0.0, "topology.ru_height_m", "must be > 0");
    if (obj.contains("link_latency_ms")) {
        const Json& l = obj.at("link_latency_ms");
        check_keys(l, {"du_ru", "cu_du", "near_rt_ric_cu", "non_rt_ric_near_rt_ric"},
                   "topology.link_latency_ms");
        read(l, "du_ru", "topology.link_latency_ms", t.latency_du_ru_ms);
        read(l, "cu_du", "topology.link_latency_ms", t.latency_cu_du_ms);
        read(l, "near_rt_ric_cu", "topology.link_latency_ms", t.latency_near_rt_ric_cu_ms);
        read(l, "non_rt_ric_near_rt_ric", "topology.link_latency_ms",
             t.latency_non_rt_ric_near_rt_ric_ms);
        require(t.latency_du_ru_ms > 0.0 && t.latency_cu_du_ms > 0.0 &&
                    t.latency_near_rt_ric_cu_ms > 0.0 &&
                    t.latency_non_rt_ric_near_rt_ric_ms > 0.0,
                "topology.link_latency_ms", "latencies must be > 0");
    }
    if (obj.contains("compute_capacity")) {
        const Json& c = obj.at("compute_capacity");
        check_keys(c, {"ru", "du", "cu", "near_rt_ric", "non_rt_ric"},
                   "topology.compute_capacity");
        read(c, "ru", "topology.compute_capacity", t.capacity_ru);
        read(c, "du", "topology.compute_capacity", t.capacity_du);
        read(c, "cu", "topology.compute_capacity", t.capacity_cu);
        read(c, "near_rt_ric", "topology.compute_capacity", t.capacity_near_rt_ric);
        read(c, "non_rt_ric", "topology.compute_capacity", t.capacity_non_rt_ric);
        require(t.capacity_ru >= 0.0 && t.capacity_du >= 0.0 && t.capacity_cu >= 0.0 &&
                    t.capacity_near_rt_ric >= 0.0 && t.capacity_non_rt_ric >= 0.0,
                "topology.compute_capacity", "capacities must be >= 0");
    }
}

inline void parse_radio(const Json& obj, RadioConfig& r) {
    check_keys(obj, {"fc_ghz", "bandwidth_hz", "tx_power_dbm", "antenna_gain_db",
                     "noise_figure_db", "prb_count", "se_cap", "ue_height_m",
                     "min_sinr_db"},
               "radio");
    read(obj, "fc_ghz", "radio", r.fc_ghz);
    read(obj, "bandwidth_hz", "radio", r.bandwidth_hz);
    read(obj, "tx_power_dbm", "radio", r.tx_power_dbm);
    read(obj, "antenna_gain_db", "radio", r.antenna_gain_db);
    read(obj, "noise_figure_db", "radio", r.noise_figure_db);
    read(obj, "prb_count", "radio", r.prb_count);
    read(obj, "se_cap", "radio", r.se_cap);
    read(obj, "ue_height_m", "radio", r.ue_height_m);
    read(obj, "min_sinr_db", "radio", r.min_sinr_db);
    require(r.fc_ghz >= 0.5 && r.fc_ghz <= 100.0, "radio.fc_ghz",
            "carrier must be within 0.5-100 GHz");
    require(r.bandwidth_hz > 0.0, "radio.bandwidth_hz", "must be > 0");
    require(r.prb_count >= 1, "radio.prb_count", "must be >= 1");
    require(r.prb_count * kPrbBandwidthHz <= r.bandwidth_hz, "radio.prb_count",
            "PRB grid exceeds the channel bandwidth");
    require(r.se_cap > 0.0, "radio.se_cap", "must be > 0");
    require(r.ue_height_m > 0.0 && r.ue_height_m <= 13.0, "radio.ue_height_m",
            "must be in (0, 13] m");
}

inline void parse_traffic(const Json& obj, TrafficConfig& t) {
    check_keys(obj, {"mix", "arrival_rate_mbps", "packet_bits"}, "traffic");
    if (obj.contains("mix")) {
        const Json& m = obj.at("mix");
        check_keys(m, {"scheduling", "beamforming", "network_slicing", "traffic_forecasting",
                       "anomaly_detection"},
                   "traffic.mix");
        read(m, "scheduling", "traffic.mix", t.mix_scheduling);
        read(m, "beamforming", "traffic.mix", t.mix_beamforming);
        read(m, "network_slicing", "traffic.mix", t.mix_network_slicing);
        read(m, "traffic_forecasting", "traffic.mix", t.mix_traffic_forecasting);
        read(m, "anomaly_detection", "traffic.mix", t.mix_anomaly_detection);
        require(t.mix_scheduling >= 0.0 && t.mix_beamforming >= 0.0 &&
                    t.mix_network_slicing >= 0.0 && t.mix_traffic_forecasting >= 0.0 &&
                    t.mix_anomaly_detection >= 0.0,
                "traffic.mix", "shares must be >= 0");
        double sum = t.mix_scheduling + t.mix_beamforming + t.mix_network_slicing +
                     t.mix_traffic_forecasting + t.mix_anomaly_detection;
        require(std::abs(sum - 1.0) <= 1e-9, "traffic.mix", "shares must sum to 1");
    }
    read(obj, "arrival_rate_mbps", "traffic", t.arrival_rate_mbps);
    read(obj, "packet_bits", "traffic", t.packet_bits);
    require(t.arrival_rate_mbps >= 0.0, "traffic.arrival_rate_mbps", "must be >= 0");
    require(t.packet_bits >= 1, "traffic.packet_bits", "must be >= 1");
}

inline void parse_rl(const Json& obj, RlConfig& r) {
    check_keys(obj, {"alpha", "gamma", "epsilon_start", "epsilon_end", "epsilon_decay_slots",
                     "w_se", "w_lat", "beam_boost_db", "delay_norm_ms"},
               "rl");
    read(obj, "alpha", "rl", r.alpha);
    read(obj, "gamma", "rl", r.gamma);
    read(obj, "epsilon_start", "rl", r.epsilon_start);
    read(obj, "epsilon_end", "rl", r.epsilon_end);
    read(obj, "epsilon_decay_slots", "rl", r.epsilon_decay_slots);
    read(obj, "w_se", "rl", r.w_se);
    read(obj, "w_lat", "rl", r.w_lat);
    read(obj, "beam_boost_db", "rl", r.beam_boost_db);
    read(obj, "delay_norm_ms", "rl", r.delay_norm_ms);
    require(r.alpha > 0.0 && r.alpha <= 1.0, "rl.alpha", "must be in (0, 1]");
    require(r.gamma >= 0.0 && r.gamma < 1.0, "rl.gamma", "must be in [0, 1)");
    require(r.epsilon_start >= 0.0 && r.epsilon_start <= 1.0, "rl.epsilon_start",
            "must be in [0, 1]");
    require(r.epsilon_end >= 0.0 && r.epsilon_end <= r.epsilon_start, "rl.epsilon_end",
            "must be in [0, epsilon_start]");
    require(r.epsilon_decay_slots >= 1, "rl.epsilon_decay_slots", "must be >= 1");
    require(r.w_se >= 0.0 && r.w_lat >= 0.0, "rl", "reward weights must be >= 0");
    require(r.delay_norm_ms > 0.0, "rl.delay_norm_ms", "must be > 0");
}

inline std::vector<ModelDescriptor> parse_catalog(const Json& arr) {
    if (!arr.is_array()) throw InvalidValueError("invalid value for 'catalog': not an array");
    std::vector<ModelDescriptor> out;
    int i = 0;
    for (const Json& e : arr) {
        std::string path = "catalog[" + std::to_string(i++) + "]";
        check_keys(e, {"id", "kind", "functionalities", "compute_cost",
                       "inference_latency_ms", "allowed_hosts"},
                   path);
        ModelDescriptor m;
        read(e, "id", path, m.id);
        if (e.contains("kind")) m.kind = parse_model_kind(e.at("kind").get<std::string>(),
                                                          path + ".kind");
        if (e.contains("functionalities"))
            for (const Json& f : e.at("functionalities"))
                m.functionalities.insert(
                    parse_functionality(f.get<std::string>(), path + ".functionalities"));
        read(e, "compute_cost", path, m.compute_cost);
        read(e, "inference_latency_ms", path, m.inference_latency_ms);
        if (e.contains("allowed_hosts"))
            for (const Json& h : e.at("allowed_hosts"))
                m.allowed_hosts.insert(
                    parse_node_kind(h.get<std::string>(), path + ".allowed_hosts"));
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace detail

/// Parses a configuration document. Absent keys keep their defaults, unknown
/// keys raise UnknownKeyError, malformed JSON raises ParseError with the
/// source position, and out-of-domain values raise InvalidValueError naming
/// the field path.
inline ScenarioSpec parse_config(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        int line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(std::string("config parse error: ") + e.what(), line, col);
    }
    if (!doc.is_object()) throw InvalidValueError("config document must be a JSON object");

    detail::check_keys(doc,
                       {"seed", "n_slots", "slot_duration_ms", "scheduler",
                        "requests_per_slot", "n_ues", "orchestration_epoch_slots",
                        "measure_start_slot", "record_per_ue", "topology", "radio",
                        "traffic", "pf", "rl", "catalog"},
                       "");

    ScenarioSpec spec;
    detail::read(doc, "seed", "", spec.seed);
    detail::read(doc, "n_slots", "", spec.n_slots);
    detail::read(doc, "slot_duration_ms", "", spec.slot_duration_ms);
    if (doc.contains("scheduler"))
        spec.scheduler = parse_scheduler(doc.at("scheduler").get<std::string>());
    detail::read(doc, "requests_per_slot", "", spec.requests_per_slot);
    detail::read(doc, "n_ues", "", spec.n_ues);
    detail::read(doc, "orchestration_epoch_slots", "", spec.orchestration_epoch_slots);
    detail::read(doc, "measure_start_slot", "", spec.measure_start_slot);
    detail::read(doc, "record_per_ue", "", spec.record_per_ue);
    detail::require(spec.n_slots >= 0, "n_slots", "must be >= 0");
    detail::require(spec.slot_duration_ms > 0.0, "slot_duration_ms", "must be > 0");
    detail::require(spec.requests_per_slot >= 0, "requests_per_slot", "must be >= 0");
    detail::require(spec.n_ues >= 0, "n_ues", "must be >= 0");
    detail::require(spec.orchestration_epoch_slots >= 1, "orchestration_epoch_slots",
                    "must be >= 1");
    detail::require(spec.measure_start_slot >= 0, "measure_start_slot", "must be >= 0");

    if (doc.contains("topology")) detail::parse_topology(doc.at("topology"), spec.topology);
    if (doc.contains("radio")) detail::parse_radio(doc.at("radio"), spec.radio);
    if (doc.contains("traffic")) detail::parse_traffic(doc.at("traffic"), spec.traffic);
    if (doc.contains("pf")) {
        detail::check_keys(doc.at("pf"), {"time_constant_slots"}, "pf");
        detail::read(doc.at("pf"), "time_constant_slots", "pf", spec.pf.time_constant_slots);
        detail::require(spec.pf.time_constant_slots >= 1.0, "pf.time_constant_slots",
                        "must be >= 1");
    }
    if (doc.contains("rl")) detail::parse_rl(doc.at("rl"), spec.rl);
    if (doc.contains("catalog")) {
        spec.catalog_override = detail::parse_catalog(doc.at("catalog"));
        Catalog check(*spec.catalog_override);  // validates entries
    }
    return spec;
}

/// Effective spec as JSON; parse_config(spec_to_json(s).dump()) == s.
inline Json spec_to_json(const ScenarioSpec& spec) {
    Json j;
    j["seed"] = spec.seed;
    j["n_slots"] = spec.n_slots;
    j["slot_duration_ms"] = spec.slot_duration_ms;
    j["scheduler"] = to_string(spec.scheduler);
    j["requests_per_slot"] = spec.requests_per_slot;
    j["n_ues"] = spec.n_ues;
    j["orchestration_epoch_slots"] = spec.orchestration_epoch_slots;
    j["measure_start_slot"] = spec.measure_start_slot;
    j["record_per_ue"] = spec.record_per_ue;
    const TopologyConfig& t = spec.topology;
    j["topology"] = {{"non_rt_rics", t.non_rt_rics},
                     {"near_rt_rics", t.near_rt_rics},
                     {"cus", t.cus},
                     {"dus", t.dus},
                     {"rus", t.rus},
                     {"area_side_m", t.area_side_m},
                     {"ru_height_m", t.ru_height_m},
                     {"link_latency_ms",
                      {{"du_ru", t.latency_du_ru_ms},
                       {"cu_du", t.latency_cu_du_ms},
                       {"near_rt_ric_cu", t.latency_near_rt_ric_cu_ms},
                       {"non_rt_ric_near_rt_ric", t.latency_non_rt_ric_near_rt_ric_ms}}},
                     {"compute_capacity",
                      {{"ru", t.capacity_ru},
                       {"du", t.capacity_du},
                       {"cu", t.capacity_cu},
                       {"near_rt_ric", t.capacity_near_rt_ric},
                       {"non_rt_ric", t.capacity_non_rt_ric}}}};
    const RadioConfig& r = spec.radio;
    j["radio"] = {{"fc_ghz", r.fc_ghz},
                  {"bandwidth_hz", r.bandwidth_hz},
                  {"tx_power_dbm", r.tx_power_dbm},
                  {"antenna_gain_db", r.antenna_gain_db},
                  {"noise_figure_db", r.noise_figure_db},
                  {"prb_count", r.prb_count},
                  {"se_cap", r.se_cap},
                  {"ue_height_m", r.ue_height_m},
                  {"min_sinr_db", r.min_sinr_db}};
    const TrafficConfig& tr = spec.traffic;
    j["traffic"] = {{"mix",
                     {{"scheduling", tr.mix_scheduling},
                      {"beamforming", tr.mix_beamforming},
                      {"network_slicing", tr.mix_network_slicing},
                      {"traffic_forecasting", tr.mix_traffic_forecasting},
                      {"anomaly_detection", tr.mix_anomaly_detection}}},
                    {"arrival_rate_mbps", tr.arrival_rate_mbps},
                    {"packet_bits", tr.packet_bits}};
    j["pf"] = {{"time_constant_slots", spec.pf.time_constant_slots}};
    const RlConfig& rl = spec.rl;
    j["rl"] = {{"alpha", rl.alpha},
               {"gamma", rl.gamma},
               {"epsilon_start", rl.epsilon_start},
               {"epsilon_end", rl.epsilon_end},
               {"epsilon_decay_slots", rl.epsilon_decay_slots},
               {"w_se", rl.w_se},
               {"w_lat", rl.w_lat},
               {"beam_boost_db", rl.beam_boost_db},
               {"delay_norm_ms", rl.delay_norm_ms}};
    if (spec.catalog_override) {
        Json arr = Json::array();
        for (const ModelDescriptor& m : *spec.catalog_override) {
            Json e;
            e["id"] = m.id;
            e["kind"] = to_string(m.kind);
            Json fs = Json::array();
            for (Functionality f : m.functionalities) fs.push_back(to_string(f));
            e["functionalities"] = fs;
            e["compute_cost"] = m.compute_cost;
            e["inference_latency_ms"] = m.inference_latency_ms;
            Json hs = Json::array();
            for (NodeKind h : m.allowed_hosts) hs.push_back(to_string(h));
            e["allowed_hosts"] = hs;
            arr.push_back(std::move(e));
        }
        j["catalog"] = arr;
    }
    return j;
}

}  // namespace ransim
