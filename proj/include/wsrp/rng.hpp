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

#ifndef WSRP_RNG_HPP
#define WSRP_RNG_HPP

#include "wsrp/common.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace wsrp {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic random source. All floating-point transforms (uniform,
// Box-Muller normal, Fisher-Yates shuffle) are spelled out here instead of
// relying on std:: distributions, whose byte streams are not pinned by the
// standard. Identical seeds reproduce identical draws on a given platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    // Circularly-symmetric complex normal with unit total variance,
    // i.e. real and imaginary parts are independent N(0, 1/2).
    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    // Uniform integer in [0, n), rejection sampled to avoid modulo bias.
    std::uint64_t uniform_u64(std::uint64_t n) {
        require(n > 0, "Rng::uniform_u64: n must be positive");
        const std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold)
                return r % n;
        }
    }

    int uniform_int(int n) { return static_cast<int>(uniform_u64(static_cast<std::uint64_t>(n))); }

    // Fisher-Yates permutation of {0, ..., n-1}.
    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            p[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(uniform_int(i + 1))]);
        return p;
    }

    // Independent child stream; children of the same parent with distinct ids
    // are decorrelated regardless of how much the parent has been consumed.
    Rng spawn(std::uint64_t stream_id) const {
        return Rng(splitmix64(seed_ ^ splitmix64(stream_id + 0x51A7ED0D15EA5EULL)));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

// Complex Gaussian matrix with i.i.d. CN(0,1) entries, filled column-major.
inline CMat complex_gaussian(Rng& rng, int rows, int cols) {
    CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = rng.complex_normal();
    return m;
}

// Haar-distributed unitary matrix: QR of a complex Gaussian with the phase
// ambiguity fixed by making the diagonal of R real positive.
inline CMat random_unitary(Rng& rng, int n) {
    const CMat g = complex_gaussian(rng, n, n);
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        const double mag = std::abs(d);
        q.col(i) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
    }
    return q;
}

// Permutation matrix P with P(i, p[i]) = 1, so (P * y)(i) = y(p[i]).
inline RMat permutation_matrix(const std::vector<int>& p) {
    const int n = static_cast<int>(p.size());
    RMat m = RMat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        m(i, p[static_cast<std::size_t>(i)]) = 1.0;
    return m;
}

} // namespace wsrp

#endif // WSRP_RNG_HPP
