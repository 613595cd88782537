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
// Test-only reference implementations. Everything here is written as plain
// loops straight from the defining formulas, independent of the library
// code paths it is used to check.

#ifndef WSRP_TEST_ORACLES_HPP
#define WSRP_TEST_ORACLES_HPP

#include "wsrp/common.hpp"
#include "wsrp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace wsrp::testing {

struct NaiveRates {
    std::vector<double> sinr;
    std::vector<double> rate;
    double weighted_sum_rate = 0.0;
};

// Straight-from-formula weighted sum rate, no matrix products.
inline NaiveRates naive_rate_report(const CMat& h, const CMat& v, const RVec& alpha,
                                    double noise_power) {
    const int n = static_cast<int>(h.rows());
    const int k_users = static_cast<int>(h.cols());
    NaiveRates out;
    for (int k = 0; k < k_users; ++k) {
        double signal = 0.0;
        double interference = 0.0;
        for (int i = 0; i < k_users; ++i) {
            Complex dot = 0.0;
            for (int a = 0; a < n; ++a)
                dot += std::conj(h(a, k)) * v(a, i);
            const double p = std::norm(dot);
            if (i == k)
                signal = p;
            else
                interference += p;
        }
        const double sinr = signal / (interference + noise_power);
        out.sinr.push_back(sinr);
        out.rate.push_back(std::log2(1.0 + sinr));
        out.weighted_sum_rate += alpha(k) * out.rate.back();
    }
    return out;
}

// Kolmogorov-Smirnov statistic of samples against a CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
        worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return worst;
}

// Pearson correlation of paired samples.
inline double sample_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Best weighted sum rate among uniformly random full-power precoders.
inline double random_search_wsr(Rng& rng, const CMat& h, const RVec& alpha, double noise_power,
                                double p_m, int num_draws) {
    const int n = static_cast<int>(h.rows());
    const int k_users = static_cast<int>(h.cols());
    double best = 0.0;
    for (int d = 0; d < num_draws; ++d) {
        CMat v = complex_gaussian(rng, n, k_users);
        v *= std::sqrt(p_m) / v.norm();
        best = std::max(best, naive_rate_report(h, v, alpha, noise_power).weighted_sum_rate);
    }
    return best;
}

// Central finite difference of a scalar function of a flat parameter vector.
inline RVec finite_difference_gradient(const std::function<double(const RVec&)>& f, RVec at,
                                       double step = 1e-6) {
    RVec grad(at.size());
    for (int i = 0; i < at.size(); ++i) {
        const double keep = at(i);
        at(i) = keep + step;
        const double fp = f(at);
        at(i) = keep - step;
        const double fm = f(at);
        at(i) = keep;
        grad(i) = (fp - fm) / (2.0 * step);
    }
    return grad;
}

// Linear-interpolation quantile of a sample (q in [0, 1]).
inline double quantile(std::vector<double> samples, double q) {
    std::sort(samples.begin(), samples.end());
    const double pos = q * static_cast<double>(samples.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= samples.size())
        return samples.back();
    const double frac = pos - static_cast<double>(lo);
    return samples[lo] * (1.0 - frac) + samples[lo + 1] * frac;
}

} // namespace wsrp::testing

#endif // WSRP_TEST_ORACLES_HPP
