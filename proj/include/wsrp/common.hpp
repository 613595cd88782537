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

#ifndef WSRP_COMMON_HPP
#define WSRP_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace wsrp {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr const char* kVersion = "0.1.0";

inline void require(bool condition, const std::string& message) {
    if (!condition)
        throw std::invalid_argument(message);
}

// Real part of the Frobenius inner product <a, b> = sum_ij conj(a_ij) * b_ij.
inline double re_inner(const CMat& a, const CMat& b) {
    return a.real().cwiseProduct(b.real()).sum() + a.imag().cwiseProduct(b.imag()).sum();
}

inline double frobenius_sq(const CMat& a) {
    return a.squaredNorm();
}

} // namespace wsrp

#endif // WSRP_COMMON_HPP
