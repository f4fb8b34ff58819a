// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "ransim/catalog.hpp"
#include "ransim/rng.hpp"

using namespace ransim;

TEST_CASE("default catalog") {
    Catalog c = default_catalog();
    REQUIRE(c.entries().size() == 5);
    REQUIRE(default_catalog() == c);

    SECTION("every entry fits its strictest compatible class bound") {
        auto strictest = [](Functionality f) {
            switch (f) {
                case Functionality::Scheduling:
                case Functionality::Beamforming: return loop_bound_ms(LatencyClass::RealTime);
                case Functionality::NetworkSlicing:
                    return loop_bound_ms(LatencyClass::NearRealTime);
                default: return loop_bound_ms(LatencyClass::NonRealTime);
            }
        };
        for (const ModelDescriptor& m : c.entries()) {
            double bound = 1e18;
            for (Functionality f : m.functionalities) bound = std::min(bound, strictest(f));
            REQUIRE(m.inference_latency_ms < bound);
        }
    }
    SECTION("stock values") {
        const ModelDescriptor* rl = c.find("rl");
        REQUIRE(rl != nullptr);
        REQUIRE(rl->compute_cost == 2.0);
        REQUIRE(rl->inference_latency_ms == 0.5);
        REQUIRE(rl->allowed_hosts == std::set<NodeKind>{NodeKind::Du, NodeKind::NearRtRic});
        const ModelDescriptor* tf = c.find("transformer");
        REQUIRE(tf != nullptr);
        REQUIRE(tf->inference_latency_ms == 500.0);
        REQUIRE(tf->allowed_hosts == std::set<NodeKind>{NodeKind::NonRtRic});
    }
}

TEST_CASE("candidate filtering") {
    Catalog c = default_catalog();
    SECTION("scheduling in real time admits only the RL model") {
        auto got = candidates(c, Functionality::Scheduling, LatencyClass::RealTime);
        REQUIRE(got.size() == 1);
        REQUIRE(got[0].id == "rl");
    }
    SECTION("forecasting cannot meet real time") {
        REQUIRE(candidates(c, Functionality::TrafficForecasting, LatencyClass::RealTime)
                    .empty());
    }
    SECTION("empty catalog answers empty") {
        Catalog empty;
        REQUIRE(candidates(empty, Functionality::Scheduling, LatencyClass::NonRealTime)
                    .empty());
    }
    SECTION("matches a brute-force scan on random catalogs") {
        Rng rng(21);
        for (int trial = 0; trial < 100; ++trial) {
            Catalog random;
            int n = 1 + static_cast<int>(rng.uniform_int(8));
            for (int i = 0; i < n; ++i) {
                ModelDescriptor m;
                m.id = "m" + std::to_string(i);
                m.kind = static_cast<ModelKind>(rng.uniform_int(5));
                m.functionalities.insert(
                    static_cast<Functionality>(rng.uniform_int(kFunctionalityCount)));
                if (rng.bernoulli(0.4))
                    m.functionalities.insert(
                        static_cast<Functionality>(rng.uniform_int(kFunctionalityCount)));
                m.compute_cost = 1.0 + static_cast<double>(rng.uniform_int(5));
                m.inference_latency_ms = rng.uniform_range(0.1, 2000.0);
                m.allowed_hosts.insert(static_cast<NodeKind>(rng.uniform_int(5)));
                random.add(m);
            }
            auto f = static_cast<Functionality>(rng.uniform_int(kFunctionalityCount));
            auto lc = static_cast<LatencyClass>(rng.uniform_int(3));
            auto got = candidates(random, f, lc);
            for (const auto& m : got) {
                REQUIRE(m.functionalities.contains(f));
                REQUIRE(m.inference_latency_ms <= loop_bound_ms(lc));
            }
            int expected = 0;
            for (const auto& m : random.entries())
                if (m.functionalities.contains(f) &&
                    m.inference_latency_ms <= loop_bound_ms(lc))
                    ++expected;
            REQUIRE(static_cast<int>(got.size()) == expected);
            for (std::size_t i = 1; i < got.size(); ++i) {
                bool ordered = got[i - 1].compute_cost < got[i].compute_cost ||
                               (got[i - 1].compute_cost == got[i].compute_cost &&
                                got[i - 1].id < got[i].id);
                REQUIRE(ordered);
            }
        }
    }
}

TEST_CASE("catalog entry validation") {
    Catalog c;
    c.add({"a", ModelKind::ReinforcementLearning, {Functionality::Scheduling}, 1.0, 1.0,
           {NodeKind::Du}});
    REQUIRE_THROWS_AS(c.add({"a", ModelKind::FederatedLearning,
                             {Functionality::Scheduling}, 1.0, 1.0, {NodeKind::Du}}),
                      InvalidValueError);
    REQUIRE_THROWS_AS(
        c.add({"b", ModelKind::FederatedLearning, {}, 1.0, 1.0, {NodeKind::Du}}),
        InvalidValueError);
    REQUIRE_THROWS_AS(c.add({"c", ModelKind::FederatedLearning,
                             {Functionality::Scheduling}, 0.0, 1.0, {NodeKind::Du}}),
                      InvalidValueError);
}
