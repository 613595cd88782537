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

#include "wsrp/edge_gnn.hpp"

#include "support/test_oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace wsrp;

namespace {

RMat conjugate(const RMat& pi1, const RMat& y, const RMat& pi2) {
    return pi1 * y * pi2.transpose();
}

} // namespace

TEST_CASE("direct evaluation of the update rule", "[edgegnn]") {
    RMat y(2, 2);
    y << 1.0, 2.0, 3.0, 4.0;
    EdgeGnnLayerParams p = EdgeGnnLayerParams::zeros(1, 1);
    p.self_w(0, 0) = 1.0;
    p.row_w(0, 0) = 1.0;
    p.col_w(0, 0) = 1.0;
    const auto out = edge_gnn_layer({y}, p, false);
    // self 1 + row-mean {2} + col-mean {3}
    REQUIRE(out[0](0, 0) == 6.0);
    REQUIRE(out[0](0, 1) == 2.0 + 1.0 + 4.0);
    REQUIRE(out[0](1, 0) == 3.0 + 4.0 + 1.0);
    REQUIRE(out[0](1, 1) == 4.0 + 3.0 + 2.0);
}

TEST_CASE("parameter selection gives the identity map", "[edgegnn]") {
    Rng rng(21);
    RMat y(3, 3);
    for (int i = 0; i < 9; ++i)
        y(i / 3, i % 3) = rng.normal();
    EdgeGnnLayerParams p = EdgeGnnLayerParams::zeros(1, 1);
    p.self_w(0, 0) = 1.0;
    const auto out = edge_gnn_layer({y}, p, false);
    REQUIRE((out[0] - y).norm() == 0.0);
}

TEST_CASE("single-element features have zero aggregates", "[edgegnn]") {
    RMat y(1, 1);
    y << -2.0;
    EdgeGnnLayerParams p = EdgeGnnLayerParams::zeros(1, 1);
    p.self_w(0, 0) = 0.5;
    p.row_w(0, 0) = 100.0;
    p.col_w(0, 0) = 100.0;
    p.bias(0) = 0.25;
    const auto out = edge_gnn_layer({y}, p, false);
    REQUIRE(out[0](0, 0) == -0.75);
}

TEST_CASE("hidden layers apply the leaky rectifier", "[edgegnn]") {
    RMat y(1, 1);
    y << -4.0;
    EdgeGnnLayerParams p = EdgeGnnLayerParams::zeros(1, 1);
    p.self_w(0, 0) = 1.0;
    const auto out = edge_gnn_layer({y}, p, true, 0.01);
    REQUIRE(out[0](0, 0) == Catch::Approx(-0.04));
}

TEST_CASE("layer commutes with permutation conjugation", "[edgegnn]") {
    Rng rng(22);
    const int k = 5;
    std::vector<RMat> y;
    for (int c = 0; c < 3; ++c) {
        RMat m(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                m(i, j) = rng.normal();
        y.push_back(m);
    }
    EdgeGnnLayerParams p = EdgeGnnLayerParams::zeros(3, 2);
    for (RMat* m : {&p.self_w, &p.row_w, &p.col_w})
        for (int i = 0; i < m->size(); ++i)
            (*m)(i / 2, i % 2) = rng.normal();
    p.bias << 0.3, -0.7;

    SECTION("diagonal pair") {
        const RMat pi = permutation_matrix(rng.permutation(k));
        std::vector<RMat> yp;
        for (const auto& m : y)
            yp.push_back(conjugate(pi, m, pi));
        const auto lhs = edge_gnn_layer(yp, p, true);
        const auto rhs = edge_gnn_layer(y, p, true);
        for (std::size_t c = 0; c < lhs.size(); ++c)
            REQUIRE((lhs[c] - conjugate(pi, rhs[c], pi)).norm() < 1e-10);
    }

    SECTION("independent pair") {
        const RMat pi1 = permutation_matrix(rng.permutation(k));
        const RMat pi2 = permutation_matrix(rng.permutation(k));
        std::vector<RMat> yp;
        for (const auto& m : y)
            yp.push_back(conjugate(pi1, m, pi2));
        const auto lhs = edge_gnn_layer(yp, p, true);
        const auto rhs = edge_gnn_layer(y, p, true);
        for (std::size_t c = 0; c < lhs.size(); ++c)
            REQUIRE((lhs[c] - conjugate(pi1, rhs[c], pi2)).norm() < 1e-10);
    }
}

TEST_CASE("layer backward matches finite differences", "[edgegnn]") {
    Rng rng(23);
    const int k = 3, in = 2, out = 2;
    std::vector<RMat> y;
    for (int c = 0; c < in; ++c) {
        RMat m(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                m(i, j) = rng.normal();
        y.push_back(m);
    }

    const int count = 3 * in * out + out;
    RVec flat(count);
    for (int i = 0; i < count; ++i)
        flat(i) = 0.3 * rng.normal();

    auto unpack = [&](const RVec& v) {
        EdgeGnnLayerParams p = EdgeGnnLayerParams::zeros(in, out);
        int at = 0;
        for (RMat* m : {&p.self_w, &p.row_w, &p.col_w})
            for (int j = 0; j < out; ++j)
                for (int i = 0; i < in; ++i)
                    (*m)(i, j) = v(at++);
        for (int j = 0; j < out; ++j)
            p.bias(j) = v(at++);
        return p;
    };

    // scalar objective: squared norm of the rectified outputs
    auto objective = [&](const RVec& v) {
        const auto res = edge_gnn_layer(y, unpack(v), true, 0.01);
        double s = 0.0;
        for (const auto& m : res)
            s += m.squaredNorm();
        return s;
    };

    const EdgeGnnLayerParams p = unpack(flat);
    const auto pre = edge_gnn_layer(y, p, false);
    auto post = pre;
    for (auto& m : post)
        m = m.unaryExpr([](double v) { return leaky_rectifier(v, 0.01); });
    std::vector<RMat> g_out;
    for (const auto& m : post)
        g_out.push_back(2.0 * m);

    EdgeGnnLayerParams g_p = EdgeGnnLayerParams::zeros(in, out);
    edge_gnn_layer_backward(y, pre, g_out, p, g_p, true, 0.01);

    RVec analytic(count);
    int at = 0;
    for (RMat* m : {&g_p.self_w, &g_p.row_w, &g_p.col_w})
        for (int j = 0; j < out; ++j)
            for (int i = 0; i < in; ++i)
                analytic(at++) = (*m)(i, j);
    for (int j = 0; j < out; ++j)
        analytic(at++) = g_p.bias(j);

    const RVec numeric = testing::finite_difference_gradient(objective, flat, 1e-6);
    for (int i = 0; i < count; ++i)
        REQUIRE(std::abs(analytic(i) - numeric(i)) <
                1e-6 * std::max(1.0, numeric.cwiseAbs().maxCoeff()));
}
