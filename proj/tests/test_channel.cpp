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

#include "wsrp/channel.hpp"

#include "support/test_oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace wsrp;

TEST_CASE("pathloss anchor and slope", "[channel]") {
    const Geometry g;
    REQUIRE(pathloss_db(1.0, g) == 13.54);
    // 13.54 + 39.08*log10(200) evaluated independently
    REQUIRE(pathloss_db(200.0, g) == Catch::Approx(103.46).margin(0.01));
    REQUIRE_THROWS_AS(pathloss_db(0.5, g), std::invalid_argument);
}

TEST_CASE("noise power from cell-edge SNR", "[channel]") {
    const Geometry g;
    const double base = noise_power_for_edge_snr(0.0, 1.0, g);
    REQUIRE(base == Catch::Approx(4.51e-11).epsilon(0.01)); // 10^(-103.46/10)
    REQUIRE(noise_power_for_edge_snr(10.0, 1.0, g) == base / 10.0);
    REQUIRE(noise_power_for_edge_snr(0.0, 2.0, g) == 2.0 * base);
}

TEST_CASE("channel sampling statistics", "[channel]") {
    const Geometry g;
    Rng rng(2024);
    const int draws = 10000;
    const int n = 4;

    double small_scale_sq = 0.0;
    std::vector<double> distances;
    distances.reserve(draws);
    for (int t = 0; t < draws; ++t) {
        const auto c = sample_channel(rng, n, 1, g, 0.0, 1.0);
        small_scale_sq += c.H.col(0).squaredNorm() / c.ue_gains(0);
        distances.push_back(c.ue_distances_m(0));
    }
    REQUIRE(small_scale_sq / draws == Catch::Approx(static_cast<double>(n)).epsilon(0.05));

    const double lo = g.min_distance_m * g.min_distance_m;
    const double hi = g.cell_radius_m * g.cell_radius_m;
    const double ks = testing::ks_statistic(
        distances, [&](double d) { return (d * d - lo) / (hi - lo); });
    REQUIRE(ks < 0.02);
}

TEST_CASE("same seed reproduces the realization bit for bit", "[channel]") {
    const Geometry g;
    Rng a(9001), b(9001);
    const auto c1 = sample_channel(a, 8, 4, g, 5.0, 1.0);
    const auto c2 = sample_channel(b, 8, 4, g, 5.0, 1.0);
    REQUIRE((c1.H - c2.H).norm() == 0.0);
    REQUIRE(c1.noise_power == c2.noise_power);
    REQUIRE((c1.ue_distances_m - c2.ue_distances_m).norm() == 0.0);
}

TEST_CASE("episode evolution limits", "[channel]") {
    const Geometry g;
    Rng rng(31);
    const auto base = sample_channel(rng, 4, 3, g, 5.0, 1.0);

    SECTION("rho = 1 freezes the channel") {
        Rng er(32);
        const auto ep = evolve_episode(er, base, 10, 1.0);
        for (const auto& h : ep.slots)
            REQUIRE((h - ep.slots.front()).norm() == 0.0);
    }

    SECTION("rho = 0 decorrelates adjacent slots") {
        Rng er(33);
        std::vector<double> now, next;
        for (int rep = 0; rep < 40; ++rep) {
            const auto b2 = sample_channel(er, 8, 8, g, 5.0, 1.0);
            const auto ep = evolve_episode(er, b2, 4, 0.0);
            for (std::size_t t = 0; t + 1 < ep.slots.size(); ++t)
                for (int j = 0; j < 8; ++j)
                    for (int i = 0; i < 8; ++i) {
                        now.push_back(ep.slots[t](i, j).real());
                        next.push_back(ep.slots[t + 1](i, j).real());
                    }
        }
        REQUIRE(std::abs(testing::sample_correlation(now, next)) < 0.05);
    }
}

TEST_CASE("episode evolution matches the AR(1) moments", "[channel]") {
    const Geometry g;
    const double rho = 0.9;
    REQUIRE(std::sqrt(1.0 - rho * rho) == Catch::Approx(0.43589).margin(1e-5));

    Rng rng(34);
    std::vector<double> now, next;
    double var_sum = 0.0;
    std::size_t var_count = 0;
    for (int rep = 0; rep < 60; ++rep) {
        const auto base = sample_channel(rng, 8, 8, g, 5.0, 1.0);
        const auto ep = evolve_episode(rng, base, 6, rho);
        for (std::size_t t = 0; t + 1 < ep.slots.size(); ++t)
            for (int j = 0; j < 8; ++j) {
                const double scale = std::sqrt(ep.ue_gains(j));
                for (int i = 0; i < 8; ++i) {
                    now.push_back(ep.slots[t](i, j).real() / scale);
                    now.push_back(ep.slots[t](i, j).imag() / scale);
                    next.push_back(ep.slots[t + 1](i, j).real() / scale);
                    next.push_back(ep.slots[t + 1](i, j).imag() / scale);
                }
            }
        // stationarity: last slot still has unit-variance small-scale entries
        const auto& last = ep.slots.back();
        for (int j = 0; j < 8; ++j)
            var_sum += last.col(j).squaredNorm() / ep.ue_gains(j);
        var_count += 64;
    }
    REQUIRE(now.size() >= 10000);
    REQUIRE(testing::sample_correlation(now, next) == Catch::Approx(rho).margin(0.02));
    REQUIRE(var_sum / static_cast<double>(var_count) == Catch::Approx(1.0).epsilon(0.05));
}

TEST_CASE("episode shares large-scale state and validates inputs", "[channel]") {
    const Geometry g;
    Rng rng(35);
    const auto base = sample_channel(rng, 4, 2, g, 0.0, 1.0);
    const auto ep = evolve_episode(rng, base, 5, 0.5);
    REQUIRE(ep.slots.size() == 5);
    REQUIRE((ep.ue_distances_m - base.ue_distances_m).norm() == 0.0);
    REQUIRE(ep.noise_power == base.noise_power);
    REQUIRE_THROWS_AS(evolve_episode(rng, base, 5, 1.5), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_channel(rng, 0, 2, g, 0.0, 1.0), std::invalid_argument);
}
