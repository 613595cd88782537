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

#include "wsrp/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace wsrp;

TEST_CASE("identical seeds give identical streams", "[rng]") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
    Rng c(42), d(42);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(c.normal() == d.normal());
    }
}

TEST_CASE("normal moments", "[rng]") {
    Rng rng(7);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum_sq += x * x;
    }
    REQUIRE(std::abs(sum / n) < 0.02);
    REQUIRE(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("complex normal has unit total variance", "[rng]") {
    Rng rng(9);
    const int n = 100000;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i)
        sum_sq += std::norm(rng.complex_normal());
    REQUIRE(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("spawned streams differ from parent and each other", "[rng]") {
    Rng parent(5);
    Rng c0 = parent.spawn(0);
    Rng c1 = parent.spawn(1);
    REQUIRE(c0.next_u64() != c1.next_u64());
    // Spawning is a pure function of (seed, stream id).
    Rng c0_again = Rng(5).spawn(0);
    c0 = Rng(5).spawn(0);
    REQUIRE(c0.next_u64() == c0_again.next_u64());
}

TEST_CASE("permutations are unbiased enough and valid", "[rng]") {
    Rng rng(11);
    const int k = 5;
    std::vector<int> first_count(k, 0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        auto p = rng.permutation(k);
        std::vector<bool> seen(k, false);
        for (int v : p) {
            REQUIRE(v >= 0);
            REQUIRE(v < k);
            REQUIRE(!seen[static_cast<std::size_t>(v)]);
            seen[static_cast<std::size_t>(v)] = true;
        }
        first_count[static_cast<std::size_t>(p[0])]++;
    }
    for (int c : first_count)
        REQUIRE(std::abs(c - trials / k) < trials / k / 5);
}

TEST_CASE("random unitary is unitary", "[rng]") {
    Rng rng(13);
    for (int n : {1, 2, 5}) {
        const CMat u = random_unitary(rng, n);
        REQUIRE((u.adjoint() * u - CMat::Identity(n, n)).norm() < 1e-12);
    }
}

TEST_CASE("permutation matrix acts as index lookup", "[rng]") {
    const std::vector<int> p = {2, 0, 1};
    const RMat m = permutation_matrix(p);
    Eigen::Vector3d y(10.0, 20.0, 30.0);
    const Eigen::Vector3d z = m * y;
    REQUIRE(z(0) == 30.0);
    REQUIRE(z(1) == 10.0);
    REQUIRE(z(2) == 20.0);
}
