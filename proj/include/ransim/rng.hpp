// SPDX-License-Identifier: Apache-2.0
//
// Counter-free substream RNG. Every stochastic draw in the simulator comes
// from a stream keyed by (seed, domain tag, slot, entity ids), so results do
// not depend on loop or thread execution order. Distributions are hand-rolled
// on top of the raw generator: the standard library leaves distribution
// sequences implementation-defined, which would break replay equality across
// toolchains.
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace ransim {

/// splitmix64 step (Vigna). Good enough statistical quality for simulation
/// substreams and about as cheap as a generator gets.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : state_(mix64(seed)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

    double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// One standard normal via Box-Muller; consumes two uniforms, discards
    /// the second variate so consumption stays fixed.
    double normal() {
        auto [z, _] = normal_pair();
        return z;
    }

    /// Pair of independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair() {
        double u1 = uniform();
        // guard against log(0)
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    /// Poisson variate. Knuth's product method, chunked so large means stay
    /// exact (Poisson(a+b) = Poisson(a) + Poisson(b)).
    std::uint64_t poisson(double lambda) {
        std::uint64_t total = 0;
        while (lambda > 0.0) {
            double chunk = lambda > 30.0 ? 30.0 : lambda;
            lambda -= chunk;
            double limit = std::exp(-chunk);
            double prod = uniform();
            std::uint64_t k = 0;
            while (prod > limit) {
                ++k;
                prod *= uniform();
            }
            total += k;
        }
        return total;
    }

private:
    std::uint64_t state_;
};

/// Derive a substream generator from a master seed and a key path. Used as
/// substream(seed, {TAG, slot, id}); equal inputs give equal streams.
inline Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t part : key) h = mix64(h ^ mix64(part));
    return Rng(h);
}

/// Domain tags for substream derivation. One per independent random process.
namespace rng_tag {
inline constexpr std::uint64_t kTopology = 1;
inline constexpr std::uint64_t kUeSpawn = 2;
inline constexpr std::uint64_t kRequests = 3;
inline constexpr std::uint64_t kArrivals = 4;
inline constexpr std::uint64_t kChannel = 5;
inline constexpr std::uint64_t kAgent = 6;
}  // namespace rng_tag

}  // namespace ransim
