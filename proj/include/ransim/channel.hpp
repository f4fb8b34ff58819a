// SPDX-License-Identifier: Apache-2.0
//
// Radio propagation for the 28 GHz Urban Macro deployment: TR 38.901 UMa
// path loss with its LOS probability model, lognormal shadowing, and
// Rician/Rayleigh small-scale fading gated by the drawn LOS state. SINR and
// spectral efficiency sit on top.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "ransim/errors.hpp"
#include "ransim/rng.hpp"

namespace ransim {

inline constexpr double kSpeedOfLight = 3.0e8;          // m/s, per the standard
inline constexpr double kPrbBandwidthHz = 12 * 120e3;   // 12 subcarriers at 120 kHz
inline constexpr double kThermalNoiseDbmHz = -174.0;

struct LinkGeometry {
    double d2d_m = 0.0;
    double h_bs_m = 25.0;
    double h_ut_m = 1.5;
    double fc_ghz = 28.0;

    double d3d_m() const { return std::hypot(d2d_m, h_bs_m - h_ut_m); }
};

struct RadioConfig {
    double fc_ghz = 28.0;
    double bandwidth_hz = 4.0e8;
    double tx_power_dbm = 35.0;
    double antenna_gain_db = 8.0;
    double noise_figure_db = 9.0;
    int prb_count = 264;
    double se_cap = 7.8;
    double ue_height_m = 1.5;
    // Below this SINR no MCS decodes and the link carries nothing; roughly
    // the lowest NR MCS operating point.
    double min_sinr_db = -6.7;

    double grid_bandwidth_hz() const { return prb_count * kPrbBandwidthHz; }

    bool operator==(const RadioConfig&) const = default;
};

struct ChannelRealization {
    bool los = false;
    double path_loss_db = 0.0;
    double shadow_db = 0.0;     // zero-mean lognormal shadowing
    double fast_fade_db = 0.0;  // small-scale power gain
};

/// UMa LOS probability (outdoor UE at or below 13 m, so the high-UE
/// correction term vanishes). 1 inside 18 m, decaying toward 0 beyond.
inline double los_probability(double d2d_m, double h_ut_m = 1.5) {
    (void)h_ut_m;
    if (d2d_m <= 18.0) return 1.0;
    double ratio = 18.0 / d2d_m;
    return ratio + std::exp(-d2d_m / 63.0) * (1.0 - ratio);
}

/// UMa path loss in dB. LOS uses the dual-slope model around the breakpoint
/// distance d'BP = 4 (h_bs - 1)(h_ut - 1) fc / c; NLOS is floored by the LOS
/// value. Valid for d2d up to 5 km.
inline double path_loss_db(const LinkGeometry& geom, bool los) {
    if (geom.d2d_m > 5000.0)
        throw OutOfValidityError("d2d " + std::to_string(geom.d2d_m) +
                                 " m beyond the 5 km UMa validity range");
    double d3d = geom.d3d_m();
    double fc_term = 20.0 * std::log10(geom.fc_ghz);
    double dbp = 4.0 * (geom.h_bs_m - 1.0) * (geom.h_ut_m - 1.0) *
                 (geom.fc_ghz * 1e9) / kSpeedOfLight;
    double pl_los;
    if (geom.d2d_m <= dbp) {
        pl_los = 28.0 + 22.0 * std::log10(d3d) + fc_term;
    } else {
        double dh = geom.h_bs_m - geom.h_ut_m;
        pl_los = 28.0 + 40.0 * std::log10(d3d) + fc_term -
                 9.0 * std::log10(dbp * dbp + dh * dh);
    }
    if (los) return pl_los;
    double pl_nlos = 13.54 + 39.08 * std::log10(d3d) + fc_term -
                     0.6 * (geom.h_ut_m - 1.5);
    return std::max(pl_los, pl_nlos);
}

inline constexpr double kShadowSigmaLosDb = 4.0;
inline constexpr double kShadowSigmaNlosDb = 6.0;
inline constexpr double kRicianKDb = 9.0;

inline double db_to_linear(double db) {
    return std::exp(db * 0.23025850929940457);  // ln(10) / 10
}

/// Both path-loss branches of a link plus its LOS probability. Geometry is
/// static, so callers on hot paths evaluate this once per link.
struct PathLossPair {
    double los_prob = 1.0;
    double pl_los_db = 0.0;
    double pl_nlos_db = 0.0;
};

inline PathLossPair path_loss_pair(const LinkGeometry& geom) {
    return {los_probability(geom.d2d_m, geom.h_ut_m), path_loss_db(geom, true),
            path_loss_db(geom, false)};
}

/// One link's random state for a slot: LOS coin, lognormal shadowing, and a
/// unit-mean small-scale power gain (Rician, K = 9 dB, when LOS; Rayleigh,
/// i.e. exponential power, otherwise).
struct FadingDraw {
    bool los = false;
    double shadow_db = 0.0;
    double fade_power = 1.0;
};

inline FadingDraw draw_fading(double los_prob, Rng& rng) {
    FadingDraw f;
    f.los = rng.bernoulli(los_prob);
    f.shadow_db = rng.normal() * (f.los ? kShadowSigmaLosDb : kShadowSigmaNlosDb);
    if (f.los) {
        auto [x, y] = rng.normal_pair();
        double k = std::pow(10.0, kRicianKDb / 10.0);
        double re = std::sqrt(k / (k + 1.0)) + std::sqrt(0.5 / (k + 1.0)) * x;
        double im = std::sqrt(0.5 / (k + 1.0)) * y;
        f.fade_power = re * re + im * im;
    } else {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        f.fade_power = -std::log(u);  // exponential = Rayleigh power
    }
    return f;
}

inline ChannelRealization draw_realization(const PathLossPair& pl, Rng& rng) {
    FadingDraw f = draw_fading(pl.los_prob, rng);
    ChannelRealization r;
    r.los = f.los;
    r.path_loss_db = f.los ? pl.pl_los_db : pl.pl_nlos_db;
    r.shadow_db = f.shadow_db;
    r.fast_fade_db = 10.0 * std::log10(std::max(f.fade_power, 1e-30));
    return r;
}

/// Draws LOS state, shadowing and small-scale fading for one link.
inline ChannelRealization draw_realization(const LinkGeometry& geom, Rng& rng) {
    return draw_realization(path_loss_pair(geom), rng);
}

/// One interfering transmitter: its channel toward the victim plus the share
/// of its transmit power falling on the victim's PRBs.
struct Interferer {
    ChannelRealization channel;
    double power_share = 0.0;  // fraction of total transmit power, in [0, 1]
};

inline double received_power_dbm(const ChannelRealization& ch, const RadioConfig& radio,
                                 double power_share) {
    return radio.tx_power_dbm + 10.0 * std::log10(power_share) + radio.antenna_gain_db -
           ch.path_loss_db - ch.shadow_db + ch.fast_fade_db;
}

/// SINR over an allocation. Transmit power is split evenly over the PRB
/// grid, so the serving share is alloc_bandwidth / grid_bandwidth; interferer
/// received powers add linearly on the same PRBs.
inline double sinr_db(const ChannelRealization& serving, const RadioConfig& radio,
                      std::span<const Interferer> interferers,
                      double alloc_bandwidth_hz) {
    if (alloc_bandwidth_hz <= 0.0)
        throw EmptyAllocationError("allocation bandwidth must be positive");
    double share = alloc_bandwidth_hz / radio.grid_bandwidth_hz();
    double s_dbm = received_power_dbm(serving, radio, share);
    double n_dbm = kThermalNoiseDbmHz + 10.0 * std::log10(alloc_bandwidth_hz) +
                   radio.noise_figure_db;
    double denom_mw = std::pow(10.0, n_dbm / 10.0);
    for (const Interferer& i : interferers)
        denom_mw += std::pow(10.0, received_power_dbm(i.channel, radio, i.power_share) / 10.0);
    return s_dbm - 10.0 * std::log10(denom_mw);
}

/// Shannon spectral efficiency clipped at the modulation ceiling.
inline double spectral_efficiency(double sinr_db_value, double cap) {
    double se = std::log2(1.0 + std::pow(10.0, sinr_db_value / 10.0));
    return std::min(se, cap);
}

}  // namespace ransim
