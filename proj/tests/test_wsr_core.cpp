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

#include "wsrp/wsr_core.hpp"

#include "wsrp/rng.hpp"
#include "support/test_oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace wsrp;

TEST_CASE("orthogonal unit instance", "[wsr]") {
    const CMat h = CMat::Identity(2, 2);
    const CMat v = CMat::Identity(2, 2);
    RVec alpha(2);
    alpha << 1.0, 1.0;
    const auto rep = rate_report(h, v, alpha, 1.0);
    REQUIRE(rep.sinr(0) == 1.0);
    REQUIRE(rep.sinr(1) == 1.0);
    REQUIRE(rep.weighted_sum_rate == 2.0);

    alpha << 2.0, 0.0; // zero weight removes UE 2's term
    REQUIRE(rate_report(h, v, alpha, 1.0).weighted_sum_rate == 2.0);
}

TEST_CASE("rate report matches the straight-from-formula oracle", "[wsr]") {
    Rng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + rng.uniform_int(5);
        const int k = 1 + rng.uniform_int(n);
        const CMat h = complex_gaussian(rng, n, k);
        const CMat v = complex_gaussian(rng, n, k);
        RVec alpha(k);
        for (int i = 0; i < k; ++i)
            alpha(i) = rng.uniform(0.0, 2.0);
        const double noise = rng.uniform(0.01, 2.0);
        const auto rep = rate_report(h, v, alpha, noise);
        const auto naive = testing::naive_rate_report(h, v, alpha, noise);
        REQUIRE(std::abs(rep.weighted_sum_rate - naive.weighted_sum_rate) <=
                1e-12 * std::max(1.0, std::abs(naive.weighted_sum_rate)));
        for (int i = 0; i < k; ++i)
            REQUIRE(rep.sinr(i) == Catch::Approx(naive.sinr[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
}

TEST_CASE("rate report rejects bad shapes", "[wsr]") {
    const CMat h = CMat::Identity(3, 2);
    const CMat v = CMat::Identity(3, 3);
    RVec alpha = RVec::Ones(2);
    REQUIRE_THROWS_AS(rate_report(h, v, alpha, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(rate_report(h, CMat::Identity(3, 2), RVec::Ones(3), 1.0), std::invalid_argument);
}

TEST_CASE("power projection", "[wsr]") {
    CMat v = CMat::Zero(2, 2);
    v(0, 0) = 3.0; // Frobenius norm 3, power 9
    const CMat scaled = project_power(v, 4.0);
    REQUIRE(std::abs(scaled(0, 0).real() - 2.0) < 1e-15); // scaled by 2/3

    Rng rng(33);
    for (int t = 0; t < 100; ++t) {
        const CMat w = complex_gaussian(rng, 4, 3);
        const double p = rng.uniform(0.1, 10.0);
        REQUIRE(std::abs(total_power(project_power(w, p)) - p) <= 1e-12 * p);
    }

    const CMat u = complex_gaussian(rng, 3, 2);
    const CMat same = project_power(u, total_power(u));
    REQUIRE((same - u).norm() <= 1e-12 * u.norm());

    REQUIRE_THROWS_AS(project_power(CMat::Zero(2, 2), 1.0), std::invalid_argument);
}

TEST_CASE("mrt and zf baselines", "[wsr]") {
    Rng rng(55);

    // K = 1: matched filter direction
    const CMat h1 = complex_gaussian(rng, 4, 1);
    const CMat v1 = mrt(h1, 2.0);
    const CMat expected = h1 * (std::sqrt(2.0) / h1.norm());
    REQUIRE((v1 - expected).norm() < 1e-12);

    for (int t = 0; t < 10; ++t) {
        const CMat h = complex_gaussian(rng, 6, 3);
        const double p = rng.uniform(0.5, 4.0);
        const CMat vm = mrt(h, p);
        const CMat vz = zf(h, p);
        REQUIRE(std::abs(total_power(vm) - p) <= 1e-12 * p);
        REQUIRE(std::abs(total_power(vz) - p) <= 1e-12 * p);
        const CMat cross = h.adjoint() * vz;
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                if (i != k)
                    REQUIRE(std::abs(cross(k, i)) < 1e-9);
    }

    // rank-deficient channel: duplicate columns
    CMat bad(4, 2);
    bad.col(0) = complex_gaussian(rng, 4, 1);
    bad.col(1) = bad.col(0);
    REQUIRE_THROWS_WITH(zf(bad, 1.0), Catch::Matchers::ContainsSubstring("inversion"));
    REQUIRE_THROWS_AS(zf(complex_gaussian(rng, 2, 3), 1.0), std::invalid_argument);
}

TEST_CASE("objective is invariant under joint unitary/permutation transforms", "[wsr]") {
    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
        const int n = 4, k = 3;
        const CMat h = complex_gaussian(rng, n, k);
        const CMat v = complex_gaussian(rng, n, k);
        RVec alpha(k);
        for (int i = 0; i < k; ++i)
            alpha(i) = rng.uniform(0.1, 2.0);
        const double noise = rng.uniform(0.05, 1.0);

        const CMat u = random_unitary(rng, n);
        const RMat pi = permutation_matrix(rng.permutation(k));
        const CMat pi_c = pi.cast<Complex>();

        const double base = rate_report(h, v, alpha, noise).weighted_sum_rate;
        const double moved = rate_report(u * h * pi_c.transpose(), u * v * pi_c.transpose(),
                                         pi * alpha, noise)
                                 .weighted_sum_rate;
        REQUIRE(std::abs(base - moved) <= 1e-9 * std::max(1.0, std::abs(base)));
    }
}

TEST_CASE("weight homogeneity and noise monotonicity", "[wsr]") {
    Rng rng(88);
    const CMat h = complex_gaussian(rng, 4, 3);
    const CMat v = complex_gaussian(rng, 4, 3);
    RVec alpha(3);
    alpha << 0.3, 1.2, 0.5;

    const double base = rate_report(h, v, alpha, 0.2).weighted_sum_rate;
    REQUIRE(rate_report(h, v, (2.0 * alpha).eval(), 0.2).weighted_sum_rate == 2.0 * base);
    REQUIRE(rate_report(h, v, (3.0 * alpha).eval(), 0.2).weighted_sum_rate ==
            Catch::Approx(3.0 * base).epsilon(1e-12));

    const auto low = rate_report(h, v, alpha, 0.2);
    const auto high = rate_report(h, v, alpha, 0.4);
    for (int i = 0; i < 3; ++i)
        if (low.sinr(i) > 0.0)
            REQUIRE(high.sinr(i) < low.sinr(i));
}
