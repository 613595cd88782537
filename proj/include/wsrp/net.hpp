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
// Jointly unitary- and permutation-equivariant precoder network.
//
// The hidden state is a stack of C complex N x K feature channels,
// initialized to the channel matrix. Each main layer forms K x K edge
// features E1 = H^H X_c and E2 = diag(alpha) E1 (split into real planes),
// feeds them through a permutation-equivariant edge-GNN sub-network that
// emits per-channel-pair complex mixing matrices G, and updates the state by
// right multiplication X_{c'} <- sum_c X_c G_{c,c'}. Unitary equivariance
// holds because edge features are Gram-type inner products; permutation
// equivariance holds because the sub-network commutes with conjugation.
// Hidden layers end in the norm activation X / (1 + |X|^2); the final layer
// mixes down to one channel and is scaled to the exact power budget.
//
// net_backward is the matching hand-written reverse-mode pass; gradients of
// complex quantities use the pairing g = dJ/dRe + i dJ/dIm, under which a
// complex-linear map W = X G has adjoints g_X = g_W G^H and g_G = X^H g_W.

#ifndef WSRP_NET_HPP
#define WSRP_NET_HPP

#include "wsrp/common.hpp"
#include "wsrp/edge_gnn.hpp"
#include "wsrp/rng.hpp"
#include "wsrp/wsr_core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace wsrp {

enum class ActivationScope { per_channel, global, per_column, per_channel_mean };

// How the channel matrix is rescaled before entering the network. Both modes
// divide by the Frobenius norm (a U- and Pi-invariant), so either preserves
// the joint equivariance; they differ in the resulting feature scale across
// instance sizes. unit_entry targets |H_ij| ~ 1 (norm sqrt(NK)); unit_column
// targets |h_k| ~ 1 (norm sqrt(K)), which keeps the Gram-type edge features
// O(1) in the antenna count and generalizes better over N.
enum class InputScale { none, unit_entry, unit_column };

struct NetConfig {
    int num_layers = 3;             // main layers L
    int hidden_channels = 4;        // complex feature channels C
    int subnet_layers = 2;          // edge-GNN depth Q per main layer
    int subnet_hidden_channels = 8;
    bool residual_identity = true;  // G_{c,c'} <- delta_{c,c'} I + learned
    bool residual_mean_mixing = false; // scale the learned mixing by 1/K
    bool feature_norm = false;      // divide edge features by their E1 RMS
    ActivationScope activation_scope = ActivationScope::per_channel;
    InputScale input_scale = InputScale::unit_entry;
    bool scale_weights = true;      // normalize alpha to mean 1
    double leaky_slope = 0.01;
    double init_scale = 1.0;
};

inline void validate(const NetConfig& c) {
    require(c.num_layers >= 1 && c.hidden_channels >= 1 && c.subnet_layers >= 1 &&
                c.subnet_hidden_channels >= 1,
            "NetConfig: layer and channel counts must be positive");
    require(c.leaky_slope >= 0.0 && c.init_scale > 0.0, "NetConfig: bad scales");
}

// Output channel count of main layer l: C everywhere except the final layer,
// which mixes down to the single precoder channel.
inline int mix_out_channels(const NetConfig& c, int layer) {
    return (layer == c.num_layers - 1) ? 1 : c.hidden_channels;
}

// Real channel plan of the sub-network at main layer l:
// 4C feature planes in, 2 * C * C_out mixing planes out.
inline std::vector<int> subnet_plan(const NetConfig& c, int layer) {
    std::vector<int> plan;
    plan.push_back(4 * c.hidden_channels);
    for (int q = 0; q < c.subnet_layers - 1; ++q)
        plan.push_back(c.subnet_hidden_channels);
    plan.push_back(2 * c.hidden_channels * mix_out_channels(c, layer));
    return plan;
}

struct NetParams {
    std::vector<std::vector<EdgeGnnLayerParams>> subnets; // [main layer][sub layer]

    int parameter_count() const {
        int total = 0;
        for (const auto& subnet : subnets)
            for (const auto& layer : subnet)
                total += layer.parameter_count();
        return total;
    }

    // Flat layout (fixed, used by the checkpoint format): for each main layer,
    // for each sub-layer: self_w, row_w, col_w column-major, then bias.
    RVec flatten() const {
        RVec out(parameter_count());
        Eigen::Index at = 0;
        for (const auto& subnet : subnets)
            for (const auto& layer : subnet) {
                for (const RMat* m : {&layer.self_w, &layer.row_w, &layer.col_w}) {
                    out.segment(at, m->size()) = Eigen::Map<const RVec>(m->data(), m->size());
                    at += m->size();
                }
                out.segment(at, layer.bias.size()) = layer.bias;
                at += layer.bias.size();
            }
        return out;
    }

    void unflatten(const RVec& flat) {
        require(flat.size() == parameter_count(), "NetParams: flat vector length mismatch");
        Eigen::Index at = 0;
        for (auto& subnet : subnets)
            for (auto& layer : subnet) {
                for (RMat* m : {&layer.self_w, &layer.row_w, &layer.col_w}) {
                    *m = Eigen::Map<const RMat>(flat.data() + at, m->rows(), m->cols());
                    at += m->size();
                }
                layer.bias = flat.segment(at, layer.bias.size());
                at += layer.bias.size();
            }
    }

    static NetParams zeros(const NetConfig& cfg) {
        validate(cfg);
        NetParams p;
        p.subnets.resize(static_cast<std::size_t>(cfg.num_layers));
        for (int l = 0; l < cfg.num_layers; ++l) {
            const auto plan = subnet_plan(cfg, l);
            for (std::size_t q = 0; q + 1 < plan.size(); ++q)
                p.subnets[static_cast<std::size_t>(l)].push_back(
                    EdgeGnnLayerParams::zeros(plan[q], plan[q + 1]));
        }
        return p;
    }

    // Scaled-normal weights, zero biases; the output sub-layer starts small so
    // the initial mixing stays near the identity residual.
    static NetParams random_init(const NetConfig& cfg, Rng& rng) {
        NetParams p = zeros(cfg);
        for (auto& subnet : p.subnets)
            for (std::size_t q = 0; q < subnet.size(); ++q) {
                auto& layer = subnet[q];
                const bool last = (q + 1 == subnet.size());
                const double fan_in = 3.0 * layer.in_channels();
                const double std_dev = cfg.init_scale * (last ? 0.1 : 1.0) * std::sqrt(2.0 / fan_in);
                for (RMat* m : {&layer.self_w, &layer.row_w, &layer.col_w})
                    for (Eigen::Index j = 0; j < m->cols(); ++j)
                        for (Eigen::Index i = 0; i < m->rows(); ++i)
                            (*m)(i, j) = std_dev * rng.normal();
            }
        return p;
    }
};

// K x K edge features of the current state: for each channel c the planes
// (Re E1, Im E1, Re E2, Im E2) with E1 = H^H X_c and E2 = diag(alpha) E1.
inline std::vector<RMat> edge_features(const std::vector<CMat>& x, const CMat& chan,
                                       const RVec& alpha) {
    require(!x.empty(), "edge_features: empty state");
    require(chan.rows() == x.front().rows() && chan.cols() == x.front().cols(),
            "edge_features: state/channel shape mismatch");
    require(alpha.size() == chan.cols(), "edge_features: weight length mismatch");
    std::vector<RMat> planes;
    planes.reserve(4 * x.size());
    for (const CMat& xc : x) {
        const CMat e1 = chan.adjoint() * xc;
        const CMat e2 = alpha.asDiagonal() * e1;
        planes.push_back(e1.real());
        planes.push_back(e1.imag());
        planes.push_back(e2.real());
        planes.push_back(e2.imag());
    }
    return planes;
}

struct SubnetTrace {
    std::vector<std::vector<RMat>> inputs;  // per sub-layer: input planes
    std::vector<std::vector<RMat>> preact;  // per sub-layer: pre-activation outputs
};

// Runs the edge-GNN stack on the feature planes and pairs the final
// 2 * c_in * c_out planes into complex mixing matrices G[c][c'];
// plane 2*(c*c_out + c') is Re G_{c,c'}, the next one Im G_{c,c'}.
// mixing_scale multiplies the learned part (1/K keeps the update magnitude
// stable across UE counts).
inline std::vector<std::vector<CMat>> subnet_forward(const std::vector<RMat>& planes,
                                                     const std::vector<EdgeGnnLayerParams>& subnet,
                                                     int c_in, int c_out, bool residual,
                                                     double leaky_slope, double mixing_scale = 1.0,
                                                     SubnetTrace* trace = nullptr) {
    require(!subnet.empty(), "subnet_forward: empty sub-network");
    require(subnet.front().in_channels() == static_cast<int>(planes.size()),
            "subnet_forward: feature plane count does not match the sub-network");
    require(subnet.back().out_channels() == 2 * c_in * c_out,
            "subnet_forward: sub-network output does not match the mixing plan");

    std::vector<RMat> current = planes;
    for (std::size_t q = 0; q < subnet.size(); ++q) {
        const bool hidden = (q + 1 < subnet.size());
        if (trace)
            trace->inputs.push_back(current);
        std::vector<RMat> pre = edge_gnn_layer(current, subnet[q], false, leaky_slope);
        if (trace)
            trace->preact.push_back(pre);
        if (hidden)
            for (RMat& m : pre)
                m = m.unaryExpr([leaky_slope](double v) { return leaky_rectifier(v, leaky_slope); });
        current = std::move(pre);
    }

    const auto k = current.front().rows();
    std::vector<std::vector<CMat>> mix(static_cast<std::size_t>(c_in));
    for (int c = 0; c < c_in; ++c) {
        mix[static_cast<std::size_t>(c)].resize(static_cast<std::size_t>(c_out));
        for (int o = 0; o < c_out; ++o) {
            const std::size_t base = 2 * static_cast<std::size_t>(c * c_out + o);
            CMat g = mixing_scale * (current[base].cast<Complex>() +
                                     Complex(0.0, 1.0) * current[base + 1].cast<Complex>());
            if (residual && c == o)
                g += CMat::Identity(k, k);
            mix[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)] = std::move(g);
        }
    }
    return mix;
}

// Norm activation X / (1 + |X|^2); per-channel scope uses each channel's own
// Frobenius norm, global scope shares the joint norm, per-column scope
// applies the rule to every UE column separately, and per_channel_mean
// divides the squared norm by K (mean per-UE power), which keeps the
// operating point stable across UE counts while preserving relative column
// magnitudes. All variants commute with unitary rotations and UE
// permutations (the norms are invariants).
inline void activation(std::vector<CMat>& x, ActivationScope scope) {
    if (scope == ActivationScope::per_channel) {
        for (CMat& xc : x)
            xc /= 1.0 + xc.squaredNorm();
    } else if (scope == ActivationScope::per_channel_mean) {
        for (CMat& xc : x)
            xc /= 1.0 + xc.squaredNorm() / static_cast<double>(xc.cols());
    } else if (scope == ActivationScope::per_column) {
        for (CMat& xc : x)
            for (Eigen::Index j = 0; j < xc.cols(); ++j)
                xc.col(j) /= 1.0 + xc.col(j).squaredNorm();
    } else {
        double total = 0.0;
        for (const CMat& xc : x)
            total += xc.squaredNorm();
        for (CMat& xc : x)
            xc /= 1.0 + total;
    }
}

struct LayerTrace {
    std::vector<CMat> x_in;              // state entering the layer
    SubnetTrace subnet;                  // holds the (conditioned) planes as inputs[0]
    double feature_scale = 1.0;          // RMS divisor applied to the planes
    std::vector<std::vector<CMat>> mix;  // complex mixing matrices (with residual)
    std::vector<CMat> x_mixed;           // state after mixing, before activation
};

struct ForwardTrace {
    CMat chan_scaled;
    RVec alpha_scaled;
    std::vector<LayerTrace> layers;
    CMat x_out;   // X^{(L)}, single channel, before the power projection
    double p_m = 0.0;
};

// Full forward pass; `trace` (optional) captures everything net_backward needs.
inline CMat net_forward(const CMat& chan, const RVec& alpha, double p_m, const NetParams& params,
                        const NetConfig& cfg, ForwardTrace* trace = nullptr) {
    validate(cfg);
    require(chan.rows() >= 1 && chan.cols() >= 1, "net_forward: empty channel");
    require(chan.allFinite(), "net_forward: channel contains non-finite entries");
    require(alpha.size() == chan.cols(), "net_forward: weight length mismatch");
    require(alpha.minCoeff() >= 0.0 && alpha.sum() > 0.0,
            "net_forward: weights must be nonnegative with positive sum");
    require(p_m > 0.0, "net_forward: power budget must be positive");
    require(static_cast<int>(params.subnets.size()) == cfg.num_layers,
            "net_forward: parameter layer count does not match the config");

    const auto n = chan.rows();
    const auto k = chan.cols();
    const int c_feat = cfg.hidden_channels;

    // Both conditioners are invariant under U and Pi, so they preserve the
    // joint equivariance of the whole map.
    CMat h = chan;
    if (cfg.input_scale != InputScale::none) {
        const double norm = chan.norm();
        require(norm > 0.0, "net_forward: all-zero channel");
        const double target = cfg.input_scale == InputScale::unit_entry
                                  ? std::sqrt(static_cast<double>(n * k))
                                  : std::sqrt(static_cast<double>(k));
        h *= target / norm;
    }
    RVec a = alpha;
    if (cfg.scale_weights)
        a *= static_cast<double>(k) / alpha.sum();

    if (trace) {
        trace->chan_scaled = h;
        trace->alpha_scaled = a;
        trace->p_m = p_m;
        trace->layers.clear();
    }

    const double mixing_scale =
        cfg.residual_mean_mixing ? 1.0 / static_cast<double>(k) : 1.0;
    std::vector<CMat> x(static_cast<std::size_t>(c_feat), h);
    for (int l = 0; l < cfg.num_layers; ++l) {
        LayerTrace lt;
        if (trace)
            lt.x_in = x;
        const int c_out = mix_out_channels(cfg, l);
        std::vector<RMat> planes = edge_features(x, h, a);
        double feature_scale = 1.0;
        if (cfg.feature_norm) {
            // RMS over the unweighted (E1) planes; a U- and Pi-invariant,
            // so dividing by it preserves the joint equivariance.
            double sum_sq = 0.0;
            for (int c = 0; c < c_feat; ++c) {
                sum_sq += planes[4 * static_cast<std::size_t>(c)].squaredNorm();
                sum_sq += planes[4 * static_cast<std::size_t>(c) + 1].squaredNorm();
            }
            const double count = 2.0 * c_feat * static_cast<double>(k) * static_cast<double>(k);
            feature_scale = std::sqrt(sum_sq / count + 1e-12);
            for (RMat& p : planes)
                p /= feature_scale;
        }
        lt.feature_scale = feature_scale;
        auto mix = subnet_forward(planes, params.subnets[static_cast<std::size_t>(l)], c_feat,
                                  c_out, cfg.residual_identity, cfg.leaky_slope, mixing_scale,
                                  trace ? &lt.subnet : nullptr);

        std::vector<CMat> next(static_cast<std::size_t>(c_out), CMat::Zero(n, k));
        for (int o = 0; o < c_out; ++o)
            for (int c = 0; c < c_feat; ++c)
                next[static_cast<std::size_t>(o)].noalias() +=
                    x[static_cast<std::size_t>(c)] *
                    mix[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)];

        if (trace) {
            lt.mix = std::move(mix);
            lt.x_mixed = next;
            trace->layers.push_back(std::move(lt));
        }
        for (const CMat& xc : next)
            if (!xc.allFinite())
                throw std::runtime_error("net_forward: non-finite state after layer " +
                                         std::to_string(l + 1));
        if (l + 1 < cfg.num_layers)
            activation(next, cfg.activation_scope);
        x = std::move(next);
    }

    if (trace)
        trace->x_out = x.front();
    return project_power(x.front(), p_m);
}

namespace detail {

// Backward through y = x / (1 + s) with s the squared norm of the scope.
inline void activation_backward(const std::vector<CMat>& x_mixed, std::vector<CMat>& grad,
                                ActivationScope scope) {
    if (scope == ActivationScope::per_channel) {
        for (std::size_t c = 0; c < x_mixed.size(); ++c) {
            const double t = 1.0 / (1.0 + x_mixed[c].squaredNorm());
            const double coupling = re_inner(grad[c], x_mixed[c]);
            grad[c] = t * grad[c] - (2.0 * t * t * coupling) * x_mixed[c];
        }
    } else if (scope == ActivationScope::per_channel_mean) {
        for (std::size_t c = 0; c < x_mixed.size(); ++c) {
            const double inv_k = 1.0 / static_cast<double>(x_mixed[c].cols());
            const double t = 1.0 / (1.0 + x_mixed[c].squaredNorm() * inv_k);
            const double coupling = re_inner(grad[c], x_mixed[c]);
            grad[c] = t * grad[c] - (2.0 * t * t * coupling * inv_k) * x_mixed[c];
        }
    } else if (scope == ActivationScope::per_column) {
        for (std::size_t c = 0; c < x_mixed.size(); ++c)
            for (Eigen::Index j = 0; j < x_mixed[c].cols(); ++j) {
                const double t = 1.0 / (1.0 + x_mixed[c].col(j).squaredNorm());
                const double coupling =
                    grad[c].col(j).real().cwiseProduct(x_mixed[c].col(j).real()).sum() +
                    grad[c].col(j).imag().cwiseProduct(x_mixed[c].col(j).imag()).sum();
                grad[c].col(j) = t * grad[c].col(j) - (2.0 * t * t * coupling) * x_mixed[c].col(j);
            }
    } else {
        double total = 0.0;
        for (const CMat& xc : x_mixed)
            total += xc.squaredNorm();
        const double t = 1.0 / (1.0 + total);
        double coupling = 0.0;
        for (std::size_t c = 0; c < x_mixed.size(); ++c)
            coupling += re_inner(grad[c], x_mixed[c]);
        for (std::size_t c = 0; c < x_mixed.size(); ++c)
            grad[c] = t * grad[c] - (2.0 * t * t * coupling) * x_mixed[c];
    }
}

} // namespace detail

// Reverse-mode pass. `v_grad` is dJ/dV of the projected output in the pair
// convention; parameter gradients are accumulated into `grads`, which must
// have the same shape as `params`.
inline void net_backward(const ForwardTrace& trace, const NetParams& params, const NetConfig& cfg,
                         const CMat& v_grad, NetParams& grads) {
    const int c_feat = cfg.hidden_channels;
    const double mixing_scale =
        cfg.residual_mean_mixing ? 1.0 / static_cast<double>(trace.chan_scaled.cols()) : 1.0;

    // Power projection: V = X sqrt(p)/|X|.
    const double norm_sq = trace.x_out.squaredNorm();
    const double scale = std::sqrt(trace.p_m / norm_sq);
    const double coupling = re_inner(v_grad, trace.x_out);
    std::vector<CMat> grad_x(1);
    grad_x[0] = scale * v_grad - (scale * coupling / norm_sq) * trace.x_out;

    for (int l = cfg.num_layers - 1; l >= 0; --l) {
        const LayerTrace& lt = trace.layers[static_cast<std::size_t>(l)];
        const int c_out = mix_out_channels(cfg, l);

        if (l + 1 < cfg.num_layers)
            detail::activation_backward(lt.x_mixed, grad_x, cfg.activation_scope);

        // Mixing X_out[o] = sum_c X_in[c] G[c][o].
        std::vector<CMat> grad_x_in(static_cast<std::size_t>(c_feat),
                                    CMat::Zero(trace.chan_scaled.rows(), trace.chan_scaled.cols()));
        std::vector<RMat> grad_planes(
            static_cast<std::size_t>(2 * c_feat * c_out));
        for (int c = 0; c < c_feat; ++c)
            for (int o = 0; o < c_out; ++o) {
                const auto cs = static_cast<std::size_t>(c);
                const auto os = static_cast<std::size_t>(o);
                grad_x_in[cs].noalias() += grad_x[os] * lt.mix[cs][os].adjoint();
                const CMat g_mix = lt.x_in[cs].adjoint() * grad_x[os];
                const std::size_t base = 2 * static_cast<std::size_t>(c * c_out + o);
                grad_planes[base] = mixing_scale * g_mix.real();
                grad_planes[base + 1] = mixing_scale * g_mix.imag();
            }

        // Sub-network backward (identity on the final sub-layer).
        auto& subnet = params.subnets[static_cast<std::size_t>(l)];
        auto& g_subnet = grads.subnets[static_cast<std::size_t>(l)];
        std::vector<RMat> g_current = std::move(grad_planes);
        for (int q = static_cast<int>(subnet.size()) - 1; q >= 0; --q) {
            const auto qs = static_cast<std::size_t>(q);
            const bool hidden = (qs + 1 < subnet.size());
            g_current = edge_gnn_layer_backward(lt.subnet.inputs[qs], lt.subnet.preact[qs],
                                                g_current, subnet[qs], g_subnet[qs], hidden,
                                                cfg.leaky_slope);
        }

        if (cfg.feature_norm) {
            // Backward through planes' = planes / s with s = sqrt(mean(E1^2) + eps):
            // g_raw = g/s - (T / (s^2 #)) planes' on the E1 planes, with
            // T = s * sum_a <g_a, planes'_a> and # the E1 entry count.
            const double s = lt.feature_scale;
            const std::vector<RMat>& normalized = lt.subnet.inputs.front();
            double coupling = 0.0;
            for (std::size_t a = 0; a < g_current.size(); ++a)
                coupling += g_current[a].cwiseProduct(normalized[a]).sum();
            coupling *= s;
            const auto kk = normalized.front().size();
            const double count = 2.0 * c_feat * static_cast<double>(kk);
            for (std::size_t a = 0; a < g_current.size(); ++a) {
                const bool unweighted_plane = (a % 4 == 0 || a % 4 == 1);
                RMat g_raw = g_current[a] / s;
                if (unweighted_plane)
                    g_raw -= (coupling / (s * s * count)) * normalized[a];
                g_current[a] = std::move(g_raw);
            }
        }

        // Edge features: E1 = H^H X_c, E2 = diag(alpha) E1.
        for (int c = 0; c < c_feat; ++c) {
            const auto cs = static_cast<std::size_t>(c);
            const std::size_t base = 4 * cs;
            CMat g_e1 = g_current[base].cast<Complex>() +
                        Complex(0.0, 1.0) * g_current[base + 1].cast<Complex>();
            const CMat g_e2 = g_current[base + 2].cast<Complex>() +
                              Complex(0.0, 1.0) * g_current[base + 3].cast<Complex>();
            g_e1 += trace.alpha_scaled.asDiagonal() * g_e2;
            grad_x_in[cs].noalias() += trace.chan_scaled * g_e1;
        }
        grad_x = std::move(grad_x_in);
    }
    // grad_x now holds dJ/dX^{(0)}; the input layer is the constant H, so it
    // carries no parameters and the recursion ends here.
}

// Gradient of weighted_sum_rate(chan, v, alpha, noise) with respect to the
// precoder, in the pair convention.
inline CMat wsr_gradient(const CMat& chan, const CMat& v, const RVec& alpha, double noise_power) {
    const int k_users = static_cast<int>(chan.cols());
    const CMat cross = chan.adjoint() * v; // (k,i) = h_k^H v_i
    const RMat link_power = cross.cwiseAbs2();
    static const double inv_ln2 = 1.0 / std::log(2.0);

    CMat g_cross(k_users, k_users);
    for (int k = 0; k < k_users; ++k) {
        const double signal = link_power(k, k);
        const double denom = link_power.row(k).sum() - signal + noise_power;
        const double sinr = signal / denom;
        const double common = alpha(k) * inv_ln2 / (1.0 + sinr);
        for (int i = 0; i < k_users; ++i) {
            const double d_power = (i == k) ? common / denom : -common * signal / (denom * denom);
            g_cross(k, i) = 2.0 * d_power * cross(k, i);
        }
    }
    return chan * g_cross;
}

// Relative residual of projecting the precoder columns onto the column space
// of the channel; right-multiplication layers preserve this span, so network
// outputs should sit in it up to roundoff.
inline double column_span_residual(const CMat& chan, const CMat& v) {
    const double v_norm = v.norm();
    if (v_norm == 0.0)
        return 0.0;
    Eigen::ColPivHouseholderQR<CMat> qr(chan);
    const auto rank = qr.rank();
    const CMat q = CMat(qr.householderQ()).leftCols(rank);
    return (v - q * (q.adjoint() * v)).norm() / v_norm;
}

} // namespace wsrp

#endif // WSRP_NET_HPP
