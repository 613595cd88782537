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

#ifndef WSRP_WEIGHTS_HPP
#define WSRP_WEIGHTS_HPP

#include "wsrp/common.hpp"
#include "wsrp/rng.hpp"

#include <cmath>
#include <string>

namespace wsrp {

enum class WeightLaw {
    dirichlet, // K * symmetric-Dirichlet(1): entries sum to K, marginal mean 1
    pf_replay  // weights harvested from WMMSE-driven proportional-fairness episodes
};

inline const char* to_string(WeightLaw law) {
    return law == WeightLaw::dirichlet ? "dirichlet" : "pf_replay";
}

inline WeightLaw weight_law_from_string(const std::string& s) {
    if (s == "dirichlet")
        return WeightLaw::dirichlet;
    if (s == "pf_replay")
        return WeightLaw::pf_replay;
    throw std::invalid_argument("unknown weight law: " + s);
}

// Symmetric Dirichlet(1) scaled by K: normalized standard exponentials.
inline RVec dirichlet_weights(Rng& rng, int k) {
    require(k >= 1, "dirichlet_weights: k must be positive");
    RVec w(k);
    for (int i = 0; i < k; ++i)
        w(i) = -std::log1p(-rng.uniform());
    return w * (static_cast<double>(k) / w.sum());
}

} // namespace wsrp

#endif // WSRP_WEIGHTS_HPP
