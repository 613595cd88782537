// SPDX-License-Identifier: Apache-2.0
//
// wsrp - equivariant precoder learning and simulation toolkit
// Copyright (C) 2026 the wsrp contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Single-cell downlink channel generator: area-uniform UE drops on an
// annulus, log-distance pathloss, Rayleigh small-scale fading, and
// first-order Gauss-Markov evolution across time slots. Noise power is
// derived from a target cell-edge SNR (full-power single-stream
// transmission at the cell radius).

#ifndef WSRP_CHANNEL_HPP
#define WSRP_CHANNEL_HPP

#include "wsrp/common.hpp"
#include "wsrp/rng.hpp"

#include <cmath>
#include <vector>

namespace wsrp {

struct Geometry {
    double cell_radius_m = 200.0;
    double min_distance_m = 10.0;         // UEs closer than this are not dropped
    double pathloss_1m_db = 13.54;        // pathloss at the 1 m anchor
    double pathloss_exponent_coeff = 39.08; // dB per decade of distance
};

inline void validate(const Geometry& g) {
    require(g.min_distance_m > 0.0 && g.min_distance_m < g.cell_radius_m,
            "Geometry: need 0 < min_distance_m < cell_radius_m");
    require(g.pathloss_1m_db > 0.0 && g.pathloss_exponent_coeff > 0.0,
            "Geometry: pathloss constants must be positive");
}

// Log-distance pathloss in dB; the model is anchored at 1 m.
inline double pathloss_db(double distance_m, const Geometry& g) {
    require(distance_m >= 1.0, "pathloss_db: distance below the 1 m model anchor");
    return g.pathloss_1m_db + g.pathloss_exponent_coeff * std::log10(distance_m);
}

inline double linear_gain(double distance_m, const Geometry& g) {
    return std::pow(10.0, -pathloss_db(distance_m, g) / 10.0);
}

// Noise power such that a full-power single-UE transmission at the cell edge
// sees exactly snr_edge_db.
inline double noise_power_for_edge_snr(double snr_edge_db, double p_m, const Geometry& g) {
    require(p_m > 0.0, "noise_power_for_edge_snr: power budget must be positive");
    return p_m * linear_gain(g.cell_radius_m, g) / std::pow(10.0, snr_edge_db / 10.0);
}

struct ChannelRealization {
    CMat H;                  // N x K, column k is UE k's channel
    double noise_power = 0.0;
    double power_budget = 0.0;
    RVec ue_distances_m;
    RVec ue_gains;           // linear large-scale power gains, fixed per drop
};

struct EpisodeChannels {
    std::vector<CMat> slots; // T channel matrices sharing N, K, and distances
    double correlation = 0.0;
    double noise_power = 0.0;
    double power_budget = 0.0;
    RVec ue_distances_m;
    RVec ue_gains;
};

// Distance whose squared value is uniform on [d_min^2, R^2] (area-uniform drop).
inline double sample_annulus_distance(Rng& rng, const Geometry& g) {
    const double lo = g.min_distance_m * g.min_distance_m;
    const double hi = g.cell_radius_m * g.cell_radius_m;
    return std::sqrt(lo + rng.uniform() * (hi - lo));
}

// Draw order is fixed: K distances first, then the small-scale matrix
// column-major. Identical seeds reproduce identical realizations.
inline ChannelRealization sample_channel(Rng& rng, int n, int k, const Geometry& g,
                                         double snr_edge_db, double p_m) {
    require(n >= 1 && k >= 1, "sample_channel: need n >= 1 and k >= 1");
    validate(g);
    ChannelRealization c;
    c.ue_distances_m.resize(k);
    c.ue_gains.resize(k);
    for (int j = 0; j < k; ++j) {
        c.ue_distances_m(j) = sample_annulus_distance(rng, g);
        c.ue_gains(j) = linear_gain(c.ue_distances_m(j), g);
    }
    c.H = complex_gaussian(rng, n, k);
    for (int j = 0; j < k; ++j)
        c.H.col(j) *= std::sqrt(c.ue_gains(j));
    c.noise_power = noise_power_for_edge_snr(snr_edge_db, p_m, g);
    c.power_budget = p_m;
    return c;
}

// Gauss-Markov small-scale evolution: c_t = rho c_{t-1} + sqrt(1-rho^2) w_t,
// with slot 1 equal to the base realization and large-scale gains held fixed.
inline EpisodeChannels evolve_episode(Rng& rng, const ChannelRealization& base, int t_slots,
                                      double rho) {
    require(t_slots >= 1, "evolve_episode: need at least one slot");
    require(rho >= 0.0 && rho <= 1.0, "evolve_episode: correlation must be in [0, 1]");
    const int n = static_cast<int>(base.H.rows());
    const int k = static_cast<int>(base.H.cols());

    EpisodeChannels ep;
    ep.correlation = rho;
    ep.noise_power = base.noise_power;
    ep.power_budget = base.power_budget;
    ep.ue_distances_m = base.ue_distances_m;
    ep.ue_gains = base.ue_gains;
    ep.slots.reserve(static_cast<std::size_t>(t_slots));

    // The update is applied in channel units: scaling the innovation by the
    // large-scale gain is equivalent to evolving the small-scale factors and
    // keeps the rho = 1 case bit-exact.
    const RVec scale = base.ue_gains.cwiseSqrt();
    ep.slots.push_back(base.H);
    const double innovation = std::sqrt(1.0 - rho * rho);
    for (int t = 1; t < t_slots; ++t) {
        CMat step = complex_gaussian(rng, n, k);
        for (int j = 0; j < k; ++j)
            step.col(j) *= scale(j);
        ep.slots.push_back(rho * ep.slots.back() + innovation * step);
    }
    return ep;
}

} // namespace wsrp

#endif // WSRP_CHANNEL_HPP
