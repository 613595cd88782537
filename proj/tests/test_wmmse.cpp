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

#include "wsrp/wmmse.hpp"

#include "wsrp/rng.hpp"
#include "support/test_oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace wsrp;

namespace {

PowerCurveTerms random_terms(Rng& rng, int n) {
    PowerCurveTerms t;
    t.eigenvalues.resize(n);
    t.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        t.eigenvalues(i) = rng.uniform(0.0, 5.0);
        t.weights(i) = rng.uniform(0.1, 3.0);
    }
    return t;
}

} // namespace

TEST_CASE("bisect_mu honors the inactive constraint and its postcondition", "[wmmse]") {
    Rng rng(3);
    const WmmseOptions opts;
    for (int t = 0; t < 100; ++t) {
        const auto terms = random_terms(rng, 2 + rng.uniform_int(6));
        const double p_m = rng.uniform(0.05, 20.0);
        const double mu = bisect_mu(terms, p_m, opts);
        if (terms.power(0.0) <= p_m) {
            REQUIRE(mu == 0.0);
        } else {
            REQUIRE(std::abs(terms.power(mu) - p_m) <= opts.bisect_tol * p_m);
        }
    }
}

TEST_CASE("power multiplier weakly decreases in the budget", "[wmmse]") {
    Rng rng(4);
    const auto terms = random_terms(rng, 5);
    const WmmseOptions opts;

    // oracle: dense mu sweep confirms the power curve is strictly decreasing
    double prev_power = terms.power(0.0);
    for (double mu = 1e-3; mu < 1e3; mu *= 1.5) {
        const double p = terms.power(mu);
        REQUIRE(p < prev_power);
        prev_power = p;
    }

    double prev_mu = std::numeric_limits<double>::infinity();
    for (double p_m = 0.01; p_m < 100.0; p_m *= 2.0) {
        const double mu = bisect_mu(terms, p_m, opts);
        REQUIRE(mu <= prev_mu + 1e-12);
        prev_mu = mu;
    }
}

TEST_CASE("single-user closed form", "[wmmse]") {
    Rng rng(5);
    const CMat h = complex_gaussian(rng, 4, 1) * 0.7;
    const double noise = 0.3;
    const double p_m = 2.0;
    RVec alpha = RVec::Ones(1) * 1.3;

    const auto res = wmmse_solve(h, alpha, noise, p_m);
    const double expected = alpha(0) * std::log2(1.0 + p_m * h.squaredNorm() / noise);
    REQUIRE(res.objective_trace.back() == Catch::Approx(expected).epsilon(1e-6));

    // direction matches h up to a global phase
    const CMat unit = h / h.norm();
    const Complex overlap = (unit.adjoint() * res.V)(0, 0);
    REQUIRE(std::abs(std::abs(overlap) - std::sqrt(p_m)) < 1e-6);
}

TEST_CASE("zero weight yields an exactly zero column", "[wmmse]") {
    Rng rng(6);
    const CMat h = complex_gaussian(rng, 4, 2);
    RVec alpha(2);
    alpha << 1.0, 0.0;
    const auto res = wmmse_solve(h, alpha, 0.1, 1.0);
    REQUIRE(res.V.col(1).norm() == 0.0);

    const auto single = wmmse_solve(h.col(0), RVec::Ones(1), 0.1, 1.0);
    REQUIRE((res.V.col(0) - single.V.col(0)).norm() < 1e-6);
}

TEST_CASE("beats the closed-form baselines and random search", "[wmmse]") {
    Rng rng(7);
    for (int t = 0; t < 3; ++t) {
        const CMat h = complex_gaussian(rng, 4, 3);
        RVec alpha(3);
        for (int i = 0; i < 3; ++i)
            alpha(i) = rng.uniform(0.2, 2.0);
        const double noise = 0.2;
        const double p_m = 1.0;

        const auto res = wmmse_solve(h, alpha, noise, p_m);
        const double wsr = res.objective_trace.back();
        REQUIRE(wsr >= rate_report(h, mrt(h, p_m), alpha, noise).weighted_sum_rate - 1e-9);
        REQUIRE(wsr >= rate_report(h, zf(h, p_m), alpha, noise).weighted_sum_rate - 1e-9);
        REQUIRE(wsr >= testing::random_search_wsr(rng, h, alpha, noise, p_m, 10000));
    }
}

TEST_CASE("objective trace is monotone", "[wmmse]") {
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + rng.uniform_int(5);
        const int k = 1 + rng.uniform_int(n);
        const CMat h = complex_gaussian(rng, n, k);
        RVec alpha(k);
        for (int i = 0; i < k; ++i)
            alpha(i) = rng.uniform(0.0, 2.0);
        if (alpha.maxCoeff() == 0.0)
            alpha(0) = 1.0;
        const auto res = wmmse_solve(h, alpha, rng.uniform(0.01, 1.0), rng.uniform(0.5, 4.0));
        for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
            REQUIRE(res.objective_trace[i] >= res.objective_trace[i - 1] - 1e-9);
    }
}

TEST_CASE("feasibility of the returned precoder", "[wmmse]") {
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        const CMat h = complex_gaussian(rng, 4, 3);
        const double p_m = rng.uniform(0.5, 3.0);
        const auto res = wmmse_solve(h, RVec::Ones(3), 0.1, p_m);
        REQUIRE(total_power(res.V) <= p_m * (1.0 + 1e-9));
    }
}

TEST_CASE("solver is jointly equivariant", "[wmmse]") {
    Rng rng(10);
    WmmseOptions opts;
    opts.rel_tol = 1e-9;
    opts.max_iters = 400;
    for (int t = 0; t < 5; ++t) {
        const int n = 4, k = 3;
        const CMat h = complex_gaussian(rng, n, k);
        RVec alpha(k);
        for (int i = 0; i < k; ++i)
            alpha(i) = rng.uniform(0.2, 2.0);
        const CMat u = random_unitary(rng, n);
        const RMat pi = permutation_matrix(rng.permutation(k));
        const CMat pi_c = pi.cast<Complex>();

        const auto base = wmmse_solve(h, alpha, 0.1, 1.0, opts);
        const auto moved = wmmse_solve(u * h * pi_c.transpose(), (pi * alpha).eval(), 0.1, 1.0, opts);
        const CMat expected = u * base.V * pi_c.transpose();
        REQUIRE((moved.V - expected).norm() <= 1e-5 * expected.norm());
    }
}

TEST_CASE("weight scaling leaves the precoder unchanged", "[wmmse]") {
    Rng rng(11);
    const CMat h = complex_gaussian(rng, 4, 3);
    RVec alpha(3);
    alpha << 0.4, 1.0, 1.6;
    const auto base = wmmse_solve(h, alpha, 0.1, 1.0);
    for (double c : {0.1, 10.0}) {
        const auto scaled = wmmse_solve(h, (c * alpha).eval(), 0.1, 1.0);
        REQUIRE((scaled.V - base.V).norm() <= 1e-6 * base.V.norm());
    }
}

TEST_CASE("input validation", "[wmmse]") {
    CMat h = CMat::Ones(2, 2);
    h(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    REQUIRE_THROWS_AS(wmmse_solve(h, RVec::Ones(2), 0.1, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(wmmse_solve(CMat::Ones(2, 2), RVec::Zero(2), 0.1, 1.0), std::invalid_argument);
}
