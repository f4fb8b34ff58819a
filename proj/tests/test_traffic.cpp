// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "ransim/rng.hpp"
#include "ransim/topology.hpp"
#include "ransim/traffic.hpp"

using namespace ransim;
using Catch::Matchers::WithinAbs;

namespace {
Topology default_topo(std::uint64_t seed = 1) {
    return build_topology(TopologyConfig{}, substream(seed, {rng_tag::kTopology}));
}
}  // namespace

TEST_CASE("request generation basics") {
    Topology topo = default_topo();
    TrafficConfig cfg;

    SECTION("exactly `load` requests, every slot") {
        Rng rng = substream(1, {rng_tag::kRequests, 0});
        auto reqs = generate_requests(topo, cfg, rng, 0, 100);
        REQUIRE(reqs.size() == 100);
        Rng rng2 = substream(1, {rng_tag::kRequests, 1});
        REQUIRE(generate_requests(topo, cfg, rng2, 1, 0).empty());
    }
    SECTION("identical streams give identical batches") {
        Rng a = substream(5, {rng_tag::kRequests, 3});
        Rng b = substream(5, {rng_tag::kRequests, 3});
        auto ra = generate_requests(topo, cfg, a, 3, 50);
        auto rb = generate_requests(topo, cfg, b, 3, 50);
        REQUIRE(ra.size() == rb.size());
        for (std::size_t i = 0; i < ra.size(); ++i) {
            REQUIRE(ra[i].id == rb[i].id);
            REQUIRE(ra[i].functionality == rb[i].functionality);
            REQUIRE(ra[i].latency_class == rb[i].latency_class);
            REQUIRE(ra[i].target_rus == rb[i].target_rus);
        }
    }
    SECTION("every request satisfies its type invariants") {
        Rng rng = substream(7, {rng_tag::kRequests, 2});
        for (const auto& r : generate_requests(topo, cfg, rng, 2, 500)) {
            REQUIRE_FALSE(r.target_rus.empty());
            REQUIRE(r.arrival_slot == 2);
            for (NodeId ru : r.target_rus) REQUIRE(topo.node(ru).kind == NodeKind::Ru);
            switch (r.functionality) {
                case Functionality::Scheduling:
                case Functionality::Beamforming:
                    REQUIRE(r.target_rus.size() == 1);
                    REQUIRE((r.latency_class == LatencyClass::RealTime ||
                             r.latency_class == LatencyClass::NearRealTime));
                    break;
                case Functionality::NetworkSlicing:
                    REQUIRE(r.latency_class == LatencyClass::NearRealTime);
                    break;
                default:
                    REQUIRE(r.latency_class == LatencyClass::NonRealTime);
            }
            if (r.target_rus.size() > 1) {
                NodeId du = topo.serving_du(r.target_rus.front());
                for (NodeId ru : r.target_rus) REQUIRE(topo.serving_du(ru) == du);
            }
        }
    }
    SECTION("empirical mix tracks the configured distribution") {
        std::map<Functionality, int> counts;
        int total = 0;
        for (int slot = 0; slot < 200; ++slot) {
            Rng rng = substream(11, {rng_tag::kRequests, static_cast<std::uint64_t>(slot)});
            for (const auto& r : generate_requests(topo, cfg, rng, slot, 100)) {
                ++counts[r.functionality];
                ++total;
            }
        }
        REQUIRE(total == 20000);
        auto freq = [&](Functionality f) { return counts[f] / static_cast<double>(total); };
        REQUIRE_THAT(freq(Functionality::Scheduling), WithinAbs(0.40, 0.02));
        REQUIRE_THAT(freq(Functionality::Beamforming), WithinAbs(0.30, 0.02));
        REQUIRE_THAT(freq(Functionality::NetworkSlicing), WithinAbs(0.15, 0.02));
        REQUIRE_THAT(freq(Functionality::TrafficForecasting), WithinAbs(0.10, 0.02));
        REQUIRE_THAT(freq(Functionality::AnomalyDetection), WithinAbs(0.05, 0.02));
    }
}

TEST_CASE("UE spawning") {
    Topology topo = default_topo();
    TrafficConfig cfg;

    SECTION("zero UEs") {
        Rng rng(1);
        REQUIRE(spawn_ues(topo, cfg, rng, 0).empty());
    }
    SECTION("serving RU is the nearest, empty backlog, configured rate") {
        Rng rng = substream(2, {rng_tag::kUeSpawn});
        auto ues = spawn_ues(topo, cfg, rng, 100);
        REQUIRE(ues.size() == 100);
        for (const UeSession& ue : ues) {
            REQUIRE(ue.backlog_bits == 0);
            REQUIRE(ue.arrival_rate_bps == 20e6);
            double serving_d = distance(ue.position, *topo.node(ue.serving_ru).position);
            for (NodeId ru : topo.ids_of_kind(NodeKind::Ru))
                REQUIRE(serving_d <= distance(ue.position, *topo.node(ru).position) + 1e-12);
        }
    }
    SECTION("ties go to the lowest RU id") {
        Topology t = default_topo();
        auto rus = t.ids_of_kind(NodeKind::Ru);
        for (NodeId ru : rus) t.node(ru).position = Vec2{500.0, 500.0};
        Rng rng(3);
        for (const UeSession& ue : spawn_ues(t, cfg, rng, 20))
            REQUIRE(ue.serving_ru == rus.front());
    }
}

TEST_CASE("arrival accumulation") {
    TrafficConfig cfg;
    SECTION("zero rate leaves the backlog alone") {
        UeSession ue;
        ue.arrival_rate_bps = 0.0;
        Rng rng(1);
        REQUIRE(accumulate_arrivals(ue, cfg, rng, 1.0) == 0);
        REQUIRE(ue.backlog_bits == 0);
    }
    SECTION("mean increment matches rate x slot within 1%") {
        UeSession ue;
        ue.arrival_rate_bps = 20e6;
        Rng rng(2);
        const int slots = 100000;
        for (int s = 0; s < slots; ++s) accumulate_arrivals(ue, cfg, rng, 1.0);
        double mean = static_cast<double>(ue.backlog_bits) / slots;
        REQUIRE_THAT(mean, WithinAbs(20000.0, 200.0));
    }
    SECTION("identical streams give identical trajectories") {
        UeSession a, b;
        a.arrival_rate_bps = b.arrival_rate_bps = 20e6;
        for (int s = 0; s < 200; ++s) {
            Rng ra = substream(9, {rng_tag::kArrivals, static_cast<std::uint64_t>(s), 0});
            Rng rb = substream(9, {rng_tag::kArrivals, static_cast<std::uint64_t>(s), 0});
            accumulate_arrivals(a, cfg, ra, 1.0);
            accumulate_arrivals(b, cfg, rb, 1.0);
            REQUIRE(a.backlog_bits == b.backlog_bits);
        }
    }
    SECTION("invalid slot duration") {
        UeSession ue;
        Rng rng(1);
        REQUIRE_THROWS_AS(accumulate_arrivals(ue, cfg, rng, 0.0), InvalidArgumentError);
    }
}
