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
// Unsupervised training: gradient ascent on the expected weighted sum rate
// (the loss is the negated objective, no labels involved). Per-sample
// gradients come from the hand-written reverse-mode pass and are reduced in
// index order, so results are independent of the worker count; runs are
// deterministic functions of (dataset, config, seed).

#ifndef WSRP_TRAINING_HPP
#define WSRP_TRAINING_HPP

#include "wsrp/common.hpp"
#include "wsrp/dataset.hpp"
#include "wsrp/net.hpp"
#include "wsrp/parallel.hpp"
#include "wsrp/pf.hpp"
#include "wsrp/weights.hpp"
#include "wsrp/wmmse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace wsrp {

enum class Optimizer { adam, sgd };

inline const char* to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }

inline Optimizer optimizer_from_string(const std::string& s) {
    if (s == "adam")
        return Optimizer::adam;
    if (s == "sgd")
        return Optimizer::sgd;
    throw std::invalid_argument("unknown optimizer: " + s);
}

struct TrainConfig {
    int batch_size = 256;
    double learning_rate = 0.005;
    int num_samples = 12800; // dataset-size target used by the generator
    int epochs = 100;
    std::uint64_t seed = 1;
    Optimizer optimizer = Optimizer::adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    WeightLaw weight_sampling = WeightLaw::dirichlet;
    int jobs = 1;
};

inline void validate(const TrainConfig& c) {
    require(c.batch_size >= 1 && c.epochs >= 0 && c.num_samples >= 1 && c.jobs >= 1,
            "TrainConfig: counts must be positive");
    require(c.learning_rate >= 0.0, "TrainConfig: learning rate must be nonnegative");
}

inline double loss(const Sample& s, const NetParams& params, const NetConfig& cfg) {
    const CMat v = net_forward(s.H, s.alpha, s.power_budget, params, cfg);
    return -rate_report(s.H, v, s.alpha, s.noise_power).weighted_sum_rate;
}

inline double mean_loss(const std::vector<Sample>& batch, const NetParams& params,
                        const NetConfig& cfg) {
    require(!batch.empty(), "mean_loss: empty batch");
    double total = 0.0;
    for (const Sample& s : batch)
        total += loss(s, params, cfg);
    return total / static_cast<double>(batch.size());
}

// Exact reverse-mode gradient of the mean batch loss with respect to every
// real parameter, in flatten() order. Per-sample gradients land in disjoint
// slots and are summed in index order.
inline RVec gradient(const std::vector<Sample>& batch, const NetParams& params,
                     const NetConfig& cfg, int jobs = 1, double* batch_loss = nullptr) {
    require(!batch.empty(), "gradient: empty batch");
    const int count = params.parameter_count();
    std::vector<RVec> slots(batch.size());
    std::vector<double> losses(batch.size());
    parallel_for(0, static_cast<int>(batch.size()), jobs, [&](int i) {
        const Sample& s = batch[static_cast<std::size_t>(i)];
        ForwardTrace trace;
        const CMat v = net_forward(s.H, s.alpha, s.power_budget, params, cfg, &trace);
        losses[static_cast<std::size_t>(i)] =
            -rate_report(s.H, v, s.alpha, s.noise_power).weighted_sum_rate;
        const CMat g_v = -wsr_gradient(s.H, v, s.alpha, s.noise_power);
        NetParams grads = NetParams::zeros(cfg);
        net_backward(trace, params, cfg, g_v, grads);
        slots[static_cast<std::size_t>(i)] = grads.flatten();
    });
    RVec grad = RVec::Zero(count);
    double total_loss = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        grad += slots[i];
        total_loss += losses[i];
    }
    grad /= static_cast<double>(batch.size());
    if (!grad.allFinite())
        throw std::runtime_error("gradient: non-finite batch gradient");
    if (batch_loss)
        *batch_loss = total_loss / static_cast<double>(batch.size());
    return grad;
}

struct GradReport {
    RVec analytic;
    RVec numeric;
    double max_rel_err = 0.0;
};

// Central finite differences against the analytic gradient. The relative
// error floor keeps near-zero entries from drowning in difference noise.
inline GradReport gradient_check(const std::vector<Sample>& batch, const NetParams& params,
                                 const NetConfig& cfg, double step = 1e-6) {
    GradReport report;
    report.analytic = gradient(batch, params, cfg);

    RVec flat = params.flatten();
    report.numeric.resize(flat.size());
    NetParams probe = NetParams::zeros(cfg);
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
        const double keep = flat(i);
        flat(i) = keep + step;
        probe.unflatten(flat);
        const double up = mean_loss(batch, probe, cfg);
        flat(i) = keep - step;
        probe.unflatten(flat);
        const double down = mean_loss(batch, probe, cfg);
        flat(i) = keep;
        report.numeric(i) = (up - down) / (2.0 * step);
    }

    const double floor = 1e-3 * std::max(1.0, report.numeric.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
        const double a = report.analytic(i);
        const double n = report.numeric(i);
        report.max_rel_err = std::max(
            report.max_rel_err, std::abs(a - n) / (std::max(std::abs(a), std::abs(n)) + floor));
    }
    return report;
}

struct PfReplaySettings {
    int n = 8;
    Geometry geometry;
    double snr_edge_db = 5.0;
    double power_budget = 1.0;
    int episodes = 8;
    int num_slots = 20;
    double correlation = 0.9;
    WmmseOptions wmmse;
};

// Weight vectors observed in WMMSE-driven proportional-fairness episodes on
// fresh channels (slot 1 is the all-ones start and is skipped).
inline std::vector<RVec> harvest_pf_weights(Rng& rng, int k, const PfReplaySettings& s) {
    std::vector<RVec> pool;
    const PrecoderPolicy policy = make_wmmse_policy(s.wmmse);
    for (int e = 0; e < s.episodes; ++e) {
        const auto base =
            sample_channel(rng, s.n, k, s.geometry, s.snr_edge_db, s.power_budget);
        const auto episode = evolve_episode(rng, base, s.num_slots, s.correlation);
        const auto trace = run_pf_episode(episode, policy);
        for (int t = 1; t < trace.weights.rows(); ++t)
            pool.push_back(trace.weights.row(t).transpose());
    }
    return pool;
}

inline RVec sample_training_weights(Rng& rng, int k, WeightLaw law,
                                    const PfReplaySettings& replay = {}) {
    require(k >= 1, "sample_training_weights: k must be positive");
    if (law == WeightLaw::dirichlet)
        return dirichlet_weights(rng, k);
    PfReplaySettings one = replay;
    one.episodes = 1;
    const auto pool = harvest_pf_weights(rng, k, one);
    return pool[rng.uniform_u64(pool.size())];
}

// Training dataset: positions are redrawn per sample; each sample carries its
// own weight vector from the configured law. Sample i is a pure function of
// (seed, i), so generation is reproducible and order-independent.
inline Dataset generate_dataset(std::uint64_t seed, int n, int k, int count, const Geometry& g,
                                double snr_edge_db, double p_m, WeightLaw law,
                                const PfReplaySettings& replay = {}) {
    require(count >= 1, "generate_dataset: need at least one sample");
    Dataset d;
    d.n = n;
    d.k = k;
    d.seed = seed;
    d.snr_edge_db = snr_edge_db;
    d.power_budget = p_m;
    d.weight_law = law;
    d.geometry = g;

    std::vector<RVec> pool;
    if (law == WeightLaw::pf_replay) {
        Rng pool_rng = Rng(seed).spawn(0x9F00D);
        pool = harvest_pf_weights(pool_rng, k, replay);
    }

    d.samples.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Rng rng = Rng(seed).spawn(static_cast<std::uint64_t>(i));
        const auto chan = sample_channel(rng, n, k, g, snr_edge_db, p_m);
        Sample s;
        s.H = chan.H;
        s.noise_power = chan.noise_power;
        s.power_budget = chan.power_budget;
        s.distances_m = chan.ue_distances_m;
        s.alpha = (law == WeightLaw::dirichlet) ? dirichlet_weights(rng, k)
                                                : pool[rng.uniform_u64(pool.size())];
        d.samples.push_back(std::move(s));
    }
    return d;
}

struct OptimizerState {
    RVec m; // first moment (adam)
    RVec v; // second moment (adam)
    long step = 0;
};

inline void optimizer_step(RVec& flat_params, const RVec& grad, OptimizerState& state,
                           const TrainConfig& cfg) {
    if (cfg.optimizer == Optimizer::sgd) {
        flat_params -= cfg.learning_rate * grad;
        return;
    }
    if (state.m.size() != grad.size()) {
        state.m = RVec::Zero(grad.size());
        state.v = RVec::Zero(grad.size());
        state.step = 0;
    }
    state.step += 1;
    state.m = cfg.adam_beta1 * state.m + (1.0 - cfg.adam_beta1) * grad;
    state.v = cfg.adam_beta2 * state.v + (1.0 - cfg.adam_beta2) * grad.cwiseAbs2();
    const double m_corr = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.step));
    const double v_corr = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.step));
    const RVec step = (state.m / m_corr).cwiseQuotient(
        ((state.v / v_corr).cwiseSqrt().array() + cfg.adam_epsilon).matrix());
    flat_params -= cfg.learning_rate * step;
}

struct EpochStats {
    int epoch = 0;            // 1-based
    double mean_loss = 0.0;   // mean training loss over the epoch
    double normalized_wsr = 0.0; // held-out WSR / cached WMMSE WSR (NaN if no eval set)
};

struct TrainSnapshot {
    NetParams params;
    OptimizerState opt;
    int next_epoch = 0;
};

struct TrainResult {
    NetParams params;
    OptimizerState opt;
    std::vector<EpochStats> history;
};

class TrainingDivergence : public std::runtime_error {
public:
    TrainingDivergence(int epoch, const std::string& what)
        : std::runtime_error(what), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

using EpochCallback =
    std::function<void(const EpochStats&, const NetParams&, const OptimizerState&)>;

inline PrecoderPolicy make_net_policy(NetParams params, NetConfig cfg) {
    return [params = std::move(params), cfg](const CMat& chan, const RVec& alpha, double,
                                             double p_m) {
        return net_forward(chan, alpha, p_m, params, cfg);
    };
}

// Epoch shuffles are stateless functions of (seed, epoch), so a run resumed
// from a snapshot continues exactly where the interrupted run left off.
inline TrainResult train(const std::vector<Sample>& train_samples,
                         const std::vector<Sample>& eval_samples,
                         const std::vector<double>& eval_refs, const NetConfig& net_cfg,
                         const TrainConfig& cfg, const TrainSnapshot* resume = nullptr,
                         const EpochCallback& callback = {}) {
    validate(net_cfg);
    validate(cfg);
    require(!train_samples.empty(), "train: empty training set");
    require(eval_refs.size() == eval_samples.size(),
            "train: held-out WMMSE references do not match the eval set");

    TrainResult result;
    int start_epoch = 0;
    if (resume) {
        result.params = resume->params;
        result.opt = resume->opt;
        start_epoch = resume->next_epoch;
    } else {
        Rng init_rng = Rng(cfg.seed).spawn(0x1417);
        result.params = NetParams::random_init(net_cfg, init_rng);
    }

    RVec flat = result.params.flatten();
    const int total = static_cast<int>(train_samples.size());

    for (int epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng = Rng(cfg.seed).spawn(0xE70C + static_cast<std::uint64_t>(epoch));
        const std::vector<int> order = shuffle_rng.permutation(total);

        double loss_sum = 0.0;
        for (int begin = 0; begin < total; begin += cfg.batch_size) {
            const int end = std::min(total, begin + cfg.batch_size);
            std::vector<Sample> batch;
            batch.reserve(static_cast<std::size_t>(end - begin));
            for (int i = begin; i < end; ++i)
                batch.push_back(train_samples[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
            result.params.unflatten(flat);
            double batch_mean = 0.0;
            const RVec grad = gradient(batch, result.params, net_cfg, cfg.jobs, &batch_mean);
            loss_sum += batch_mean * static_cast<double>(end - begin);
            optimizer_step(flat, grad, result.opt, cfg);
        }
        result.params.unflatten(flat);

        EpochStats stats;
        stats.epoch = epoch + 1;
        stats.mean_loss = loss_sum / static_cast<double>(total);
        if (!std::isfinite(stats.mean_loss))
            throw TrainingDivergence(epoch + 1, "train: non-finite mean loss at epoch " +
                                                    std::to_string(epoch + 1));
        stats.normalized_wsr = std::numeric_limits<double>::quiet_NaN();
        if (!eval_samples.empty())
            stats.normalized_wsr =
                normalized_wsr(make_net_policy(result.params, net_cfg), eval_samples, eval_refs);
        result.history.push_back(stats);
        if (callback)
            callback(stats, result.params, result.opt);
    }
    result.params.unflatten(flat);
    return result;
}

} // namespace wsrp

#endif // WSRP_TRAINING_HPP
