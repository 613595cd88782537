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
// Numerical recovery of equivariant-layer weight structures: stacks the
// linear constraints L W = W R induced by sampled group elements and
// reports an orthonormal basis of the joint null space. Finitely many
// generic samples cut the same solution space as the full group with
// probability one; stability of the dimension under doubling the sample
// count is the acceptance check.

#ifndef WSRP_COMMUTANT_HPP
#define WSRP_COMMUTANT_HPP

#include "wsrp/common.hpp"
#include "wsrp/rng.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <utility>
#include <vector>

namespace wsrp {

enum class ConstraintKind {
    unitary_left,   // (I_K (x) U) W  = W (I_K (x) U),  W: NK x NK
    unitary_absorb, // (I_K (x) U) W  = W,              W: NK x K
    perm_diag,      // (P (x) P)  W   = W (P (x) P),    W: K^2 x K^2
    perm_pair       // (P1 (x) P2) W  = W (P1 (x) P2),  W: K^2 x K^2
};

inline const char* to_string(ConstraintKind k) {
    switch (k) {
    case ConstraintKind::unitary_left: return "unitary_left";
    case ConstraintKind::unitary_absorb: return "unitary_absorb";
    case ConstraintKind::perm_diag: return "perm_diag";
    case ConstraintKind::perm_pair: return "perm_pair";
    }
    return "?";
}

struct ConstraintFamily {
    ConstraintKind kind = ConstraintKind::unitary_left;
    int n = 1;                  // antenna count (unitary kinds only)
    int k = 1;                  // UE count
    int num_group_samples = 64;
};

struct SolutionSpace {
    std::vector<CMat> basis; // orthonormal under the Frobenius inner product
    int dimension = 0;       // over the complex field
    double residual = 0.0;   // max out-of-sample constraint violation of the basis
};

namespace detail {

inline bool is_unitary_kind(ConstraintKind k) {
    return k == ConstraintKind::unitary_left || k == ConstraintKind::unitary_absorb;
}

inline std::pair<int, int> unknown_shape(const ConstraintFamily& f) {
    switch (f.kind) {
    case ConstraintKind::unitary_left: return {f.n * f.k, f.n * f.k};
    case ConstraintKind::unitary_absorb: return {f.n * f.k, f.k};
    default: return {f.k * f.k, f.k * f.k};
    }
}

// Left/right multipliers of one sampled constraint L W = W R.
inline std::pair<CMat, CMat> sample_element(const ConstraintFamily& f, Rng& rng) {
    switch (f.kind) {
    case ConstraintKind::unitary_left: {
        const CMat l = Eigen::kroneckerProduct(CMat::Identity(f.k, f.k), random_unitary(rng, f.n));
        return {l, l};
    }
    case ConstraintKind::unitary_absorb: {
        const CMat l = Eigen::kroneckerProduct(CMat::Identity(f.k, f.k), random_unitary(rng, f.n));
        return {l, CMat::Identity(f.k, f.k)};
    }
    case ConstraintKind::perm_diag: {
        const RMat p = permutation_matrix(rng.permutation(f.k));
        const CMat l = Eigen::kroneckerProduct(p, p).cast<Complex>();
        return {l, l};
    }
    case ConstraintKind::perm_pair: {
        const RMat p1 = permutation_matrix(rng.permutation(f.k));
        const RMat p2 = permutation_matrix(rng.permutation(f.k));
        const CMat l = Eigen::kroneckerProduct(p1, p2).cast<Complex>();
        return {l, l};
    }
    }
    throw std::logic_error("sample_element: unknown constraint kind");
}

// vec(L W) - vec(W R) = M vec(W) with M = I (x) L - R^T (x) I.
inline CMat constraint_matrix(const CMat& l, const CMat& r, int rows, int cols) {
    return Eigen::kroneckerProduct(CMat::Identity(cols, cols), l) -
           Eigen::kroneckerProduct(r.transpose(), CMat::Identity(rows, rows));
}

// Real lift of a complex linear system acting on [Re vec(W); Im vec(W)].
inline RMat realify(const CMat& m) {
    const auto rows = m.rows(), cols = m.cols();
    RMat a(2 * rows, 2 * cols);
    a.topLeftCorner(rows, cols) = m.real();
    a.topRightCorner(rows, cols) = -m.imag();
    a.bottomLeftCorner(rows, cols) = m.imag();
    a.bottomRightCorner(rows, cols) = m.real();
    return a;
}

inline int null_count(const RVec& eigenvalues) {
    const double tol = 1e-10 * std::max(eigenvalues.maxCoeff(), 1e-30);
    int count = 0;
    for (int i = 0; i < eigenvalues.size(); ++i)
        if (eigenvalues(i) <= tol)
            ++count;
    return count;
}

} // namespace detail

// Max constraint violation ||L B - B R||_F of unit-norm basis elements over
// freshly drawn group elements (out-of-sample check).
inline double commutant_residual(const ConstraintFamily& f, const std::vector<CMat>& basis,
                                 Rng& rng, int num_checks = 100) {
    double worst = 0.0;
    for (int s = 0; s < num_checks; ++s) {
        const auto [l, r] = detail::sample_element(f, rng);
        for (const CMat& b : basis)
            worst = std::max(worst, (l * b - b * r).norm());
    }
    return worst;
}

inline SolutionSpace solve_commutant(const ConstraintFamily& f, Rng& rng) {
    require(f.k >= 1 && f.n >= 1, "solve_commutant: sizes must be positive");
    require(f.num_group_samples >= 20, "solve_commutant: need at least 20 group samples");
    const auto [rows, cols] = detail::unknown_shape(f);
    const int m = rows * cols;
    require(m <= 700, "solve_commutant: unknown has " + std::to_string(m) +
                          " entries; sizes above ~700 are rejected (desk-memory cap)");

    const bool complex_field = detail::is_unitary_kind(f.kind);
    const int real_dim = complex_field ? 2 * m : m;

    RMat gram = RMat::Zero(real_dim, real_dim);
    auto accumulate = [&](const CMat& l, const CMat& r) {
        const CMat constraint = detail::constraint_matrix(l, r, rows, cols);
        if (complex_field) {
            const RMat a = detail::realify(constraint);
            gram.noalias() += a.transpose() * a;
        } else {
            const RMat a = constraint.real();
            gram.noalias() += a.transpose() * a;
        }
    };

    // -I is a unitary matrix; including it pins down sign constraints that
    // random samples only satisfy up to numerical rank decisions.
    if (complex_field) {
        const CMat minus_i =
            Eigen::kroneckerProduct(CMat::Identity(f.k, f.k), -CMat::Identity(f.n, f.n));
        accumulate(minus_i, f.kind == ConstraintKind::unitary_left
                                ? CMat(minus_i)
                                : CMat(CMat::Identity(f.k, f.k)));
    }

    for (int s = 0; s < f.num_group_samples; ++s) {
        const auto [l, r] = detail::sample_element(f, rng);
        accumulate(l, r);
    }
    Eigen::SelfAdjointEigenSolver<RMat> eig_first(gram);
    const int null_first = detail::null_count(eig_first.eigenvalues());

    for (int s = 0; s < f.num_group_samples; ++s) {
        const auto [l, r] = detail::sample_element(f, rng);
        accumulate(l, r);
    }
    Eigen::SelfAdjointEigenSolver<RMat> eig_second(gram);
    const int null_second = detail::null_count(eig_second.eigenvalues());

    if (null_first != null_second)
        throw std::runtime_error(
            "solve_commutant: null-space dimension not stable under sample doubling (" +
            std::to_string(null_first) + " vs " + std::to_string(null_second) +
            "); increase num_group_samples");

    SolutionSpace space;
    if (complex_field) {
        require(null_second % 2 == 0,
                "solve_commutant: odd real null dimension for a complex-linear family");
        space.dimension = null_second / 2;
        if (space.dimension > 0) {
            // Each real null vector [x; y] maps to the complex matrix x + i y;
            // a complex SVD extracts an orthonormal basis of their C-span.
            CMat stacked(m, null_second);
            for (int j = 0; j < null_second; ++j) {
                const RVec v = eig_second.eigenvectors().col(j);
                stacked.col(j) = v.head(m).cast<Complex>() +
                                 Complex(0.0, 1.0) * v.tail(m).cast<Complex>();
            }
            Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeThinU);
            const double sigma_tol = 1e-8 * svd.singularValues()(0);
            int rank = 0;
            for (int i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()(i) > sigma_tol)
                    ++rank;
            require(rank == space.dimension,
                    "solve_commutant: complex rank disagrees with the realified dimension");
            for (int j = 0; j < rank; ++j) {
                CVec col = svd.matrixU().col(j);
                space.basis.push_back(Eigen::Map<const CMat>(col.data(), rows, cols));
            }
        }
    } else {
        space.dimension = null_second;
        for (int j = 0; j < null_second; ++j) {
            RVec v = eig_second.eigenvectors().col(j);
            space.basis.push_back(Eigen::Map<const RMat>(v.data(), rows, cols).cast<Complex>());
        }
    }

    space.residual = commutant_residual(f, space.basis, rng);
    return space;
}

struct KroneckerFit {
    CMat g;                // K x K factor of the fitted G^T (x) I_N
    double residual = 0.0; // relative Frobenius misfit
};

// Least-squares fit of W by G^T (x) I_N; block (i,j) of the model equals
// G(j,i) * I_N, so the optimal G(j,i) is the normalized block trace.
inline KroneckerFit verify_kronecker_structure(const CMat& w, int n, int k) {
    require(w.rows() == static_cast<Eigen::Index>(n) * k && w.cols() == w.rows(),
            "verify_kronecker_structure: W must be NK x NK");
    KroneckerFit fit;
    fit.g = CMat::Zero(k, k);
    double err_sq = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const CMat block = w.block(i * n, j * n, n, n);
            const Complex coeff = block.trace() / static_cast<double>(n);
            fit.g(j, i) = coeff;
            err_sq += (block - coeff * CMat::Identity(n, n)).squaredNorm();
        }
    }
    const double w_norm = w.norm();
    fit.residual = (w_norm > 0.0) ? std::sqrt(err_sq) / w_norm : 0.0;
    return fit;
}

} // namespace wsrp

#endif // WSRP_COMMUTANT_HPP
