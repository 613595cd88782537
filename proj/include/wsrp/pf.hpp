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
// Proportional-fairness evaluation loop. An episode walks a correlated
// channel sequence slot by slot; each slot's UE weights are the inverses of
// the per-UE average rates over all previous slots (all-ones at slot 1, so
// the first slot is a plain sum-rate step). Any precoder policy can drive
// the episode; bookkeeping is identical for all of them.

#ifndef WSRP_PF_HPP
#define WSRP_PF_HPP

#include "wsrp/channel.hpp"
#include "wsrp/common.hpp"
#include "wsrp/dataset.hpp"
#include "wsrp/weights.hpp"
#include "wsrp/wmmse.hpp"
#include "wsrp/wsr_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace wsrp {

using PrecoderPolicy =
    std::function<CMat(const CMat& chan, const RVec& alpha, double noise_power, double p_m)>;

inline PrecoderPolicy make_wmmse_policy(const WmmseOptions& opts = {}) {
    return [opts](const CMat& chan, const RVec& alpha, double noise_power, double p_m) {
        return wmmse_solve(chan, alpha, noise_power, p_m, opts).V;
    };
}

inline PrecoderPolicy make_mrt_policy() {
    return [](const CMat& chan, const RVec&, double, double p_m) { return mrt(chan, p_m); };
}

inline PrecoderPolicy make_zf_policy() {
    return [](const CMat& chan, const RVec&, double, double p_m) { return zf(chan, p_m); };
}

struct PfOptions {
    double weight_cap = 1e6;    // guard against starved UEs (zero average rate)
    bool update_weights = true; // false keeps the initial weights every slot (SRM mode)
    RVec initial_weights;       // empty means all-ones
};

struct EpisodeTrace {
    std::string policy_name;
    RMat weights;      // T x K, weights used at each slot
    RMat rates;        // T x K, per-UE rates achieved at each slot
    RVec average_rate; // per-UE mean rate over the whole episode
    int capped_weights = 0;
};

inline EpisodeTrace run_pf_episode(const EpisodeChannels& channels, const PrecoderPolicy& policy,
                                   const PfOptions& opts = {},
                                   const std::string& policy_name = "") {
    require(!channels.slots.empty(), "run_pf_episode: episode has no slots");
    const int t_slots = static_cast<int>(channels.slots.size());
    const int k = static_cast<int>(channels.slots.front().cols());

    EpisodeTrace trace;
    trace.policy_name = policy_name;
    trace.weights.resize(t_slots, k);
    trace.rates.resize(t_slots, k);

    RVec alpha = opts.initial_weights.size() > 0 ? opts.initial_weights : RVec::Ones(k);
    require(alpha.size() == k, "run_pf_episode: initial weight length mismatch");

    for (int t = 0; t < t_slots; ++t) {
        if (t > 0 && opts.update_weights) {
            // inverse of the per-UE average rate over slots 1..t
            const RVec avg = trace.rates.topRows(t).colwise().mean();
            for (int u = 0; u < k; ++u) {
                const double w = 1.0 / avg(u);
                if (!(w <= opts.weight_cap)) {
                    alpha(u) = opts.weight_cap;
                    if (trace.capped_weights++ == 0)
                        std::cerr << "run_pf_episode: weight of UE " << u
                                  << " capped at " << opts.weight_cap << "\n";
                } else {
                    alpha(u) = w;
                }
            }
        }
        trace.weights.row(t) = alpha.transpose();
        const CMat v = policy(channels.slots[static_cast<std::size_t>(t)], alpha,
                              channels.noise_power, channels.power_budget);
        const auto rep = rate_report(channels.slots[static_cast<std::size_t>(t)], v, alpha,
                                     channels.noise_power);
        trace.rates.row(t) = rep.rate.transpose();
    }
    trace.average_rate = trace.rates.colwise().mean();
    return trace;
}

// Mean over the test set of WSR(policy) / WSR(wmmse reference).
inline double normalized_wsr(const PrecoderPolicy& policy, const std::vector<Sample>& test_set,
                             const std::vector<double>& wmmse_refs) {
    require(!test_set.empty(), "normalized_wsr: empty test set");
    if (wmmse_refs.size() != test_set.size())
        throw std::runtime_error("normalized_wsr: missing WMMSE reference cache (" +
                                 std::to_string(wmmse_refs.size()) + " of " +
                                 std::to_string(test_set.size()) + " entries)");
    double total = 0.0;
    for (std::size_t i = 0; i < test_set.size(); ++i) {
        const Sample& s = test_set[i];
        const CMat v = policy(s.H, s.alpha, s.noise_power, s.power_budget);
        const double wsr = rate_report(s.H, v, s.alpha, s.noise_power).weighted_sum_rate;
        total += wsr / wmmse_refs[i];
    }
    return total / static_cast<double>(test_set.size());
}

struct CdfPoint {
    double value = 0.0;
    double level = 0.0;
};

// Pooled empirical CDF of per-UE average rates across episodes.
inline std::vector<CdfPoint> rate_cdf(const std::vector<EpisodeTrace>& traces) {
    require(!traces.empty(), "rate_cdf: no episodes");
    std::vector<double> pooled;
    for (const auto& tr : traces)
        for (Eigen::Index u = 0; u < tr.average_rate.size(); ++u)
            pooled.push_back(tr.average_rate(u));
    std::sort(pooled.begin(), pooled.end());
    std::vector<CdfPoint> cdf;
    cdf.reserve(pooled.size());
    for (std::size_t i = 0; i < pooled.size(); ++i)
        cdf.push_back({pooled[i], static_cast<double>(i + 1) / static_cast<double>(pooled.size())});
    return cdf;
}

enum class SweepAxis { num_ues, num_antennas, snr, train_samples };

inline const char* to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::num_ues: return "num_ues";
    case SweepAxis::num_antennas: return "num_antennas";
    case SweepAxis::snr: return "snr";
    case SweepAxis::train_samples: return "train_samples";
    }
    return "?";
}

inline SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "num_ues")
        return SweepAxis::num_ues;
    if (s == "num_antennas")
        return SweepAxis::num_antennas;
    if (s == "snr")
        return SweepAxis::snr;
    if (s == "train_samples")
        return SweepAxis::train_samples;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

struct SweepPoint {
    double axis_value = 0.0;
    double mean = 0.0;          // mean normalized WSR
    double ci_half_width = 0.0; // 95% normal-approximation interval
    int num_samples = 0;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::num_ues;
    std::vector<SweepPoint> points;
};

struct SweepSettings {
    SweepAxis axis = SweepAxis::num_ues;
    std::vector<double> values;
    int base_n = 8;
    int base_k = 4;
    double snr_edge_db = 5.0;
    double power_budget = 1.0;
    Geometry geometry;
    int num_samples = 64; // fresh test instances per axis point
    std::uint64_t seed = 1;
    WmmseOptions wmmse;
};

// Evaluates a fixed policy across one instance-size/SNR axis against fresh
// WMMSE references. Weights are drawn from the scaled Dirichlet law.
inline SweepResult generalization_sweep(const PrecoderPolicy& policy, const SweepSettings& s) {
    require(!s.values.empty(), "generalization_sweep: no axis values");
    if (s.axis == SweepAxis::train_samples)
        throw std::invalid_argument(
            "generalization_sweep: the train_samples axis retrains per point; "
            "use the sample-complexity sweep in the experiment layer");
    SweepResult result;
    result.axis = s.axis;
    for (std::size_t vi = 0; vi < s.values.size(); ++vi) {
        int n = s.base_n, k = s.base_k;
        double snr = s.snr_edge_db;
        switch (s.axis) {
        case SweepAxis::num_ues: k = static_cast<int>(s.values[vi]); break;
        case SweepAxis::num_antennas: n = static_cast<int>(s.values[vi]); break;
        case SweepAxis::snr: snr = s.values[vi]; break;
        default: break;
        }
        require(n >= 1 && k >= 1, "generalization_sweep: invalid axis value");

        Rng rng = Rng(s.seed).spawn(1000 + vi);
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < s.num_samples; ++i) {
            const auto chan = sample_channel(rng, n, k, s.geometry, snr, s.power_budget);
            const RVec alpha = dirichlet_weights(rng, k);
            const double ref =
                wmmse_solve(chan.H, alpha, chan.noise_power, chan.power_budget, s.wmmse)
                    .objective_trace.back();
            const CMat v = policy(chan.H, alpha, chan.noise_power, chan.power_budget);
            const double ratio =
                rate_report(chan.H, v, alpha, chan.noise_power).weighted_sum_rate / ref;
            sum += ratio;
            sum_sq += ratio * ratio;
        }
        const double mean = sum / s.num_samples;
        const double var = std::max(0.0, sum_sq / s.num_samples - mean * mean);
        result.points.push_back({s.values[vi], mean,
                                 1.96 * std::sqrt(var / s.num_samples), s.num_samples});
    }
    return result;
}

} // namespace wsrp

#endif // WSRP_PF_HPP
