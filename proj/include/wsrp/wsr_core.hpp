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
// Weighted sum rate objective, per-UE SINR/rate computation, total-power
// projection, and the closed-form MRT / zero-forcing baselines.
//
// Conventions: H and V are N x K complex matrices (antennas x UEs), column k
// belongs to UE k. Rates are in bits per channel use (log base 2).

#ifndef WSRP_WSR_CORE_HPP
#define WSRP_WSR_CORE_HPP

#include "wsrp/common.hpp"

#include <cmath>

namespace wsrp {

struct RateReport {
    RVec sinr;               // per-UE SINR, >= 0
    RVec rate;               // per-UE rate, log2(1 + sinr)
    double weighted_sum_rate = 0.0;
};

// SINR_k = |h_k^H v_k|^2 / (sum_{i != k} |h_k^H v_i|^2 + noise_power).
inline RateReport rate_report(const CMat& chan, const CMat& precoder, const RVec& alpha,
                              double noise_power) {
    const int k_users = static_cast<int>(chan.cols());
    require(precoder.rows() == chan.rows() && precoder.cols() == chan.cols(),
            "rate_report: precoder shape does not match the channel");
    require(alpha.size() == k_users, "rate_report: weight vector length does not match K");
    require(noise_power > 0.0, "rate_report: noise power must be positive");

    const RMat link_power = (chan.adjoint() * precoder).cwiseAbs2(); // (k,i): |h_k^H v_i|^2
    RateReport rep;
    rep.sinr.resize(k_users);
    rep.rate.resize(k_users);
    for (int k = 0; k < k_users; ++k) {
        const double signal = link_power(k, k);
        const double interference = link_power.row(k).sum() - signal;
        rep.sinr(k) = signal / (interference + noise_power);
        rep.rate(k) = std::log2(1.0 + rep.sinr(k));
    }
    rep.weighted_sum_rate = alpha.dot(rep.rate);
    return rep;
}

// Scales the precoder so its total power sum_k |v_k|^2 equals p_m exactly.
inline CMat project_power(const CMat& precoder, double p_m) {
    require(p_m > 0.0, "project_power: power budget must be positive");
    const double norm = precoder.norm();
    if (!(norm > 0.0))
        throw std::invalid_argument("project_power: all-zero precoder cannot be scaled");
    return precoder * (std::sqrt(p_m) / norm);
}

inline double total_power(const CMat& precoder) {
    return precoder.squaredNorm();
}

// Maximum ratio transmission: v_k = sqrt(p_m / K) * h_k / |h_k|.
inline CMat mrt(const CMat& chan, double p_m) {
    require(p_m > 0.0, "mrt: power budget must be positive");
    const int k_users = static_cast<int>(chan.cols());
    require(k_users >= 1, "mrt: need at least one UE");
    CMat v(chan.rows(), k_users);
    const double scale = std::sqrt(p_m / k_users);
    for (int k = 0; k < k_users; ++k) {
        const double n = chan.col(k).norm();
        if (!(n > 0.0))
            throw std::invalid_argument("mrt: channel column " + std::to_string(k) + " is zero");
        v.col(k) = chan.col(k) * (scale / n);
    }
    return v;
}

// Zero-forcing: columns of H (H^H H)^{-1}, each scaled to power p_m / K.
inline CMat zf(const CMat& chan, double p_m) {
    require(p_m > 0.0, "zf: power budget must be positive");
    const int k_users = static_cast<int>(chan.cols());
    require(chan.rows() >= k_users, "zf: needs K <= N");
    const CMat gram = chan.adjoint() * chan;
    Eigen::FullPivLU<CMat> lu(gram);
    if (!lu.isInvertible())
        throw std::runtime_error("zf: inversion of the channel Gram matrix H^H H failed (rank deficient)");
    CMat v = chan * lu.solve(CMat::Identity(k_users, k_users));
    const double scale_sq = p_m / k_users;
    for (int k = 0; k < k_users; ++k)
        v.col(k) *= std::sqrt(scale_sq) / v.col(k).norm();
    return v;
}

} // namespace wsrp

#endif // WSRP_WSR_CORE_HPP
