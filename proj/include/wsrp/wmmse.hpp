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
// Iterative WMMSE solver for weighted sum rate maximization under a total
// power constraint. Block-coordinate updates:
//   receivers    u_k = h_k^H v_k / (sum_i |h_k^H v_i|^2 + noise)
//   MSE weights  w_k = alpha_k / e_k,  e_k = 1 - |h_k^H v_k|^2 / (...)
//   precoders    v_k = w_k u_k (sum_j w_j |u_j|^2 h_j h_j^H + mu I)^{-1} h_k
// with the power multiplier mu located by bracketing + bisection on the
// eigenbasis of the weighted channel Gram matrix. Initialization is MRT.

#ifndef WSRP_WMMSE_HPP
#define WSRP_WMMSE_HPP

#include "wsrp/common.hpp"
#include "wsrp/wsr_core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace wsrp {

struct WmmseOptions {
    int max_iters = 200;
    double rel_tol = 1e-6;      // relative objective change stopping rule
    double bisect_tol = 1e-10;  // relative power error of the mu search
    double mu_growth = 2.0;     // bracket growth factor
};

inline void validate(const WmmseOptions& o) {
    require(o.max_iters > 0 && o.rel_tol > 0.0 && o.bisect_tol > 0.0,
            "WmmseOptions: all tolerances and counts must be positive");
    require(o.mu_growth > 1.0, "WmmseOptions: mu_growth must exceed 1");
}

struct WmmseResult {
    CMat V;
    std::vector<double> objective_trace; // weighted sum rate per outer iteration
    int iterations = 0;
    bool converged = false;
};

// Transmit power of the precoder update as a function of the multiplier mu,
// expressed on the eigenbasis of A = sum_j w_j |u_j|^2 h_j h_j^H:
//   power(mu) = sum_i s_i / (d_i + mu)^2,
// which is strictly decreasing in mu wherever it is finite.
struct PowerCurveTerms {
    RVec eigenvalues; // d_i >= 0
    RVec weights;     // s_i >= 0

    double power(double mu) const {
        double total = 0.0;
        for (int i = 0; i < eigenvalues.size(); ++i) {
            if (weights(i) == 0.0)
                continue;
            const double denom = eigenvalues(i) + mu;
            total += weights(i) / (denom * denom);
        }
        return total;
    }
};

// Smallest mu >= 0 with |power(mu) - p_m| / p_m <= bisect_tol, or 0 when the
// constraint is already inactive at mu = 0.
inline double bisect_mu(const PowerCurveTerms& terms, double p_m, const WmmseOptions& opts) {
    require(p_m > 0.0, "bisect_mu: power budget must be positive");
    require(terms.eigenvalues.size() == terms.weights.size(),
            "bisect_mu: eigenvalue/weight length mismatch");
    require(terms.eigenvalues.allFinite() && terms.weights.allFinite() &&
                terms.eigenvalues.minCoeff() >= 0.0 && terms.weights.minCoeff() >= 0.0,
            "bisect_mu: power curve terms must be finite and nonnegative");

    const double p0 = terms.power(0.0);
    if (p0 <= p_m)
        return 0.0;

    const double weight_sum = terms.weights.sum();
    // power(sqrt(sum_s / p_m)) <= p_m, so growth from below always brackets.
    double hi = std::sqrt(weight_sum / p_m) * 1e-6;
    if (!(hi > 0.0))
        hi = 1e-300;
    double lo = 0.0;
    int growth_steps = 0;
    while (terms.power(hi) > p_m) {
        lo = hi;
        hi *= opts.mu_growth;
        if (++growth_steps > 4096 || !std::isfinite(hi))
            throw std::runtime_error("bisect_mu: bracket failure, power(" + std::to_string(hi) +
                                     ") = " + std::to_string(terms.power(hi)) +
                                     " never dropped below budget " + std::to_string(p_m));
    }

    double mu = hi;
    for (int it = 0; it < 2000; ++it) {
        mu = 0.5 * (lo + hi);
        const double p = terms.power(mu);
        if (!std::isfinite(p))
            throw std::runtime_error("bisect_mu: non-finite power evaluation (numerical breakdown)");
        if (std::abs(p - p_m) <= opts.bisect_tol * p_m)
            return mu;
        if (p > p_m)
            lo = mu;
        else
            hi = mu;
        if (hi - lo <= 1e-18 * hi)
            break;
    }
    const double achieved = terms.power(mu);
    if (std::abs(achieved - p_m) <= 1e3 * opts.bisect_tol * p_m)
        return mu;
    throw std::runtime_error("bisect_mu: bisection stalled at relative power error " +
                             std::to_string(std::abs(achieved - p_m) / p_m));
}

inline WmmseResult wmmse_solve(const CMat& chan, const RVec& alpha, double noise_power,
                               double p_m, const WmmseOptions& opts = {}) {
    validate(opts);
    require(chan.allFinite(), "wmmse_solve: channel contains non-finite entries");
    require(alpha.size() == chan.cols(), "wmmse_solve: weight vector length does not match K");
    require(alpha.allFinite() && alpha.minCoeff() >= 0.0 && alpha.maxCoeff() > 0.0,
            "wmmse_solve: weights must be nonnegative with at least one positive entry");
    require(noise_power > 0.0 && p_m > 0.0,
            "wmmse_solve: noise power and power budget must be positive");

    const int n = static_cast<int>(chan.rows());
    const int k_users = static_cast<int>(chan.cols());

    WmmseResult res;
    res.V = mrt(chan, p_m);
    res.objective_trace.push_back(rate_report(chan, res.V, alpha, noise_power).weighted_sum_rate);

    CVec rx(k_users);      // u_k
    RVec mse_w(k_users);   // w_k

    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        const CMat cross = chan.adjoint() * res.V;       // (k,i) = h_k^H v_i
        const RMat link_power = cross.cwiseAbs2();
        for (int k = 0; k < k_users; ++k) {
            const double total = link_power.row(k).sum() + noise_power;
            rx(k) = cross(k, k) / total;
            // e_k computed as (interference + noise) / total to avoid the
            // catastrophic cancellation of 1 - signal/total at high SINR.
            const double err = (link_power.row(k).sum() - link_power(k, k) + noise_power) / total;
            mse_w(k) = alpha(k) / err;
        }

        RVec gram_w(k_users);
        for (int k = 0; k < k_users; ++k)
            gram_w(k) = mse_w(k) * std::norm(rx(k));
        const CMat a = (chan * gram_w.asDiagonal()) * chan.adjoint();
        Eigen::SelfAdjointEigenSolver<CMat> eig(a);
        if (eig.info() != Eigen::Success)
            throw std::runtime_error("wmmse_solve: eigendecomposition of the weighted Gram failed");
        RVec d = eig.eigenvalues().cwiseMax(0.0);
        const CMat basis_chan = eig.eigenvectors().adjoint() * chan; // (i,k) = q_i^H h_k

        PowerCurveTerms terms;
        terms.eigenvalues = d;
        terms.weights = RVec::Zero(n);
        CVec coef(k_users);
        for (int k = 0; k < k_users; ++k)
            coef(k) = mse_w(k) * rx(k);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = 0; k < k_users; ++k)
                s += std::norm(coef(k)) * std::norm(basis_chan(i, k));
            terms.weights(i) = s;
        }
        // Terms that are exactly zero in exact arithmetic show up as ~1e-30
        // garbage; flooring them keeps power(0) meaningful on rank-deficient A.
        const double s_max = terms.weights.maxCoeff();
        for (int i = 0; i < n; ++i)
            if (terms.weights(i) < 1e-14 * s_max)
                terms.weights(i) = 0.0;

        const double mu = bisect_mu(terms, p_m, opts);

        RVec inv_d(n);
        const double rank_floor = d.maxCoeff() * 1e-13;
        for (int i = 0; i < n; ++i) {
            const double denom = d(i) + mu;
            inv_d(i) = (denom > rank_floor && terms.weights(i) > 0.0) ? 1.0 / denom : 0.0;
        }
        CMat basis_scaled = eig.eigenvectors(); // Q diag(1/(d_i + mu))
        for (int i = 0; i < n; ++i)
            basis_scaled.col(i) *= inv_d(i);
        res.V = basis_scaled * basis_chan;
        for (int k = 0; k < k_users; ++k)
            res.V.col(k) *= coef(k);

        const double wsr = rate_report(chan, res.V, alpha, noise_power).weighted_sum_rate;
        const double prev = res.objective_trace.back();
        res.objective_trace.push_back(wsr);
        res.iterations = iter;
        if (std::abs(wsr - prev) <= opts.rel_tol * (std::abs(prev) + 1e-12)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace wsrp

#endif // WSRP_WMMSE_HPP
