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
// Permutation-equivariant layer on K x K edge features. Each (input channel,
// output channel) pair carries three free parameters weighting the edge
// itself, its row aggregate, and its column aggregate:
//
//   out[i,j,c'] = sum_c ( self(c,c') y[i,j,c]
//                       + row(c,c')  mean_{k != j} y[i,k,c]
//                       + col(c,c')  mean_{k != i} y[k,j,c] ) + bias(c')
//
// plus a constant bias per output channel (a multiple of the all-ones
// matrix, which commutes with permutation conjugation). Conjugating the
// input by any pair of permutations conjugates the output identically.

#ifndef WSRP_EDGE_GNN_HPP
#define WSRP_EDGE_GNN_HPP

#include "wsrp/common.hpp"
#include "wsrp/rng.hpp"

#include <vector>

namespace wsrp {

struct EdgeGnnLayerParams {
    RMat self_w; // (in_channels x out_channels)
    RMat row_w;
    RMat col_w;
    RVec bias;   // (out_channels)

    int in_channels() const { return static_cast<int>(self_w.rows()); }
    int out_channels() const { return static_cast<int>(self_w.cols()); }
    int parameter_count() const { return 3 * in_channels() * out_channels() + out_channels(); }

    static EdgeGnnLayerParams zeros(int in, int out) {
        EdgeGnnLayerParams p;
        p.self_w = RMat::Zero(in, out);
        p.row_w = RMat::Zero(in, out);
        p.col_w = RMat::Zero(in, out);
        p.bias = RVec::Zero(out);
        return p;
    }
};

// mean_{k != j} y(i, k); zero when there is a single column.
inline RMat row_aggregate(const RMat& y) {
    const auto cols = y.cols();
    if (cols <= 1)
        return RMat::Zero(y.rows(), cols);
    return (y.rowwise().sum().replicate(1, cols) - y) / static_cast<double>(cols - 1);
}

// mean_{k != i} y(k, j); zero when there is a single row.
inline RMat col_aggregate(const RMat& y) {
    const auto rows = y.rows();
    if (rows <= 1)
        return RMat::Zero(rows, y.cols());
    return (y.colwise().sum().replicate(rows, 1) - y) / static_cast<double>(rows - 1);
}

inline double leaky_rectifier(double x, double slope) { return x > 0.0 ? x : slope * x; }
inline double leaky_rectifier_slope(double x, double slope) { return x > 0.0 ? 1.0 : slope; }

// One layer; `hidden` selects the leaky rectifier (hidden sub-layers) versus
// the identity (final sub-layer).
inline std::vector<RMat> edge_gnn_layer(const std::vector<RMat>& y, const EdgeGnnLayerParams& p,
                                        bool hidden = false, double leaky_slope = 0.01) {
    const int in = p.in_channels();
    const int out = p.out_channels();
    require(static_cast<int>(y.size()) == in,
            "edge_gnn_layer: input channel count does not match the parameters");
    require(in >= 1 && out >= 1, "edge_gnn_layer: empty channel plan");
    const auto rows = y.front().rows();
    const auto cols = y.front().cols();

    std::vector<RMat> row_agg(y.size()), col_agg(y.size());
    for (std::size_t c = 0; c < y.size(); ++c) {
        row_agg[c] = row_aggregate(y[c]);
        col_agg[c] = col_aggregate(y[c]);
    }

    std::vector<RMat> result(static_cast<std::size_t>(out));
    for (int co = 0; co < out; ++co) {
        RMat acc = RMat::Constant(rows, cols, p.bias(co));
        for (int ci = 0; ci < in; ++ci) {
            const auto c = static_cast<std::size_t>(ci);
            acc.noalias() += p.self_w(ci, co) * y[c];
            acc.noalias() += p.row_w(ci, co) * row_agg[c];
            acc.noalias() += p.col_w(ci, co) * col_agg[c];
        }
        if (hidden)
            acc = acc.unaryExpr([leaky_slope](double v) { return leaky_rectifier(v, leaky_slope); });
        result[static_cast<std::size_t>(co)] = std::move(acc);
    }
    return result;
}

// Reverse-mode step for one layer. `y` and `preact` are the stored forward
// inputs and pre-activation outputs; `g_out` is the gradient with respect to
// the (post-activation) outputs. Parameter gradients accumulate into `g_p`;
// the gradient with respect to the inputs is returned. Both aggregation
// operators are self-adjoint under the Frobenius inner product, so the
// input gradient reuses them directly.
inline std::vector<RMat> edge_gnn_layer_backward(const std::vector<RMat>& y,
                                                 const std::vector<RMat>& preact,
                                                 const std::vector<RMat>& g_out,
                                                 const EdgeGnnLayerParams& p,
                                                 EdgeGnnLayerParams& g_p, bool hidden,
                                                 double leaky_slope) {
    const int in = p.in_channels();
    const int out = p.out_channels();

    std::vector<RMat> g_pre(static_cast<std::size_t>(out));
    for (int co = 0; co < out; ++co) {
        const auto c = static_cast<std::size_t>(co);
        if (hidden)
            g_pre[c] = g_out[c].cwiseProduct(preact[c].unaryExpr(
                [leaky_slope](double v) { return leaky_rectifier_slope(v, leaky_slope); }));
        else
            g_pre[c] = g_out[c];
    }

    std::vector<RMat> row_agg_in(y.size()), col_agg_in(y.size());
    for (std::size_t c = 0; c < y.size(); ++c) {
        row_agg_in[c] = row_aggregate(y[c]);
        col_agg_in[c] = col_aggregate(y[c]);
    }
    std::vector<RMat> row_agg_g(g_pre.size()), col_agg_g(g_pre.size());
    for (std::size_t c = 0; c < g_pre.size(); ++c) {
        row_agg_g[c] = row_aggregate(g_pre[c]);
        col_agg_g[c] = col_aggregate(g_pre[c]);
    }

    std::vector<RMat> g_in(static_cast<std::size_t>(in));
    for (int ci = 0; ci < in; ++ci)
        g_in[static_cast<std::size_t>(ci)] = RMat::Zero(y.front().rows(), y.front().cols());

    for (int co = 0; co < out; ++co) {
        const auto o = static_cast<std::size_t>(co);
        g_p.bias(co) += g_pre[o].sum();
        for (int ci = 0; ci < in; ++ci) {
            const auto c = static_cast<std::size_t>(ci);
            g_p.self_w(ci, co) += y[c].cwiseProduct(g_pre[o]).sum();
            g_p.row_w(ci, co) += row_agg_in[c].cwiseProduct(g_pre[o]).sum();
            g_p.col_w(ci, co) += col_agg_in[c].cwiseProduct(g_pre[o]).sum();
            g_in[c].noalias() += p.self_w(ci, co) * g_pre[o];
            g_in[c].noalias() += p.row_w(ci, co) * row_agg_g[o];
            g_in[c].noalias() += p.col_w(ci, co) * col_agg_g[o];
        }
    }
    return g_in;
}

} // namespace wsrp

#endif // WSRP_EDGE_GNN_HPP
