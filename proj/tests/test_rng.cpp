// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ransim/rng.hpp"

using namespace ransim;

TEST_CASE("substreams replay exactly and differ across keys") {
    Rng a = substream(42, {rng_tag::kChannel, 7, 3});
    Rng b = substream(42, {rng_tag::kChannel, 7, 3});
    for (int i = 0; i < 100; ++i) REQUIRE(a() == b());

    Rng c = substream(42, {rng_tag::kChannel, 7, 4});
    Rng d = substream(43, {rng_tag::kChannel, 7, 3});
    bool all_equal_c = true, all_equal_d = true;
    Rng a2 = substream(42, {rng_tag::kChannel, 7, 3});
    for (int i = 0; i < 10; ++i) {
        auto v = a2();
        all_equal_c &= v == c();
        all_equal_d &= v == d();
    }
    REQUIRE_FALSE(all_equal_c);
    REQUIRE_FALSE(all_equal_d);
}

TEST_CASE("uniform stays in [0,1) with a sane mean") {
    Rng rng(1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    REQUIRE_THAT(sum / 100000.0, Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("uniform_int covers [0,n)") {
    Rng rng(2);
    int counts[7] = {};
    for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_int(7)];
    for (int c : counts) REQUIRE_THAT(c, Catch::Matchers::WithinAbs(10000, 500));
}

TEST_CASE("normal pairs have zero mean and unit variance") {
    Rng rng(3);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        sum += z;
        sum_sq += z * z;
    }
    REQUIRE_THAT(sum / n, Catch::Matchers::WithinAbs(0.0, 0.02));
    REQUIRE_THAT(sum_sq / n, Catch::Matchers::WithinAbs(1.0, 0.02));
}

TEST_CASE("poisson matches its mean, including chunked large means") {
    Rng rng(4);
    const double lambda = 5.0 / 3.0;
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(lambda));
    REQUIRE_THAT(sum / n, Catch::Matchers::WithinAbs(lambda, 0.02));

    double big = 0.0;
    for (int i = 0; i < 2000; ++i) big += static_cast<double>(rng.poisson(75.0));
    REQUIRE_THAT(big / 2000.0, Catch::Matchers::WithinAbs(75.0, 0.8));
}
