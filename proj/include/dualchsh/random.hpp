// Copyright 2026 The dualchsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Seeded random generators for states, effects, unitaries and POVMs.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "quantum_objects.hpp"

namespace dualchsh {

using Rng = std::mt19937_64;

/// Normalized complex Gaussian vector (Haar-distributed pure state).
inline auto random_unit_vector(std::size_t d, Rng &rng) -> CVector {
    std::normal_distribution<double> normal;
    CVector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(k) = Complex{re, im};
    }
    return v / v.norm();
}

inline auto random_pure_state(std::size_t d, Rng &rng) -> QuantumState {
    return QuantumState(OperatorMatrix::projector(random_unit_vector(d, rng)));
}

/// Ginibre ensemble: G G^dagger / tr(G G^dagger).
inline auto random_mixed_state(std::size_t d, Rng &rng) -> QuantumState {
    std::normal_distribution<double> normal;
    const auto n = static_cast<Eigen::Index>(d);
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex{re, im};
        }
    }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return QuantumState(OperatorMatrix(std::move(rho)));
}

/// Uniform direction on the unit sphere scaled by a radius drawn so that
/// the vector is uniform in the unit ball.
inline auto random_bloch_ball(Rng &rng) -> BlochVector {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    RealVector3 v;
    do {
        v = {normal(rng), normal(rng), normal(rng)};
    } while (v.norm() == 0.0);
    v *= std::cbrt(unit(rng)) / v.norm();
    return BlochVector::from_eigen(v);
}

inline auto random_bloch_sphere(Rng &rng) -> BlochVector {
    std::normal_distribution<double> normal;
    RealVector3 v;
    do {
        v = {normal(rng), normal(rng), normal(rng)};
    } while (v.norm() == 0.0);
    return BlochVector::from_eigen(v / v.norm());
}

/// Haar unitary from the QR decomposition of a Ginibre matrix.
inline auto random_unitary(std::size_t d, Rng &rng) -> CMatrix {
    std::normal_distribution<double> normal;
    const auto n = static_cast<Eigen::Index>(d);
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex{re, im};
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex diag = r(k, k);
        if (std::abs(diag) > 0.0) {
            q.col(k) *= diag / std::abs(diag);
        }
    }
    return q;
}

/// U diag(lambda) U^dagger with lambda uniform in [0, 1] and U Haar.
inline auto random_effect(DimSplit split, Rng &rng) -> Effect {
    const std::size_t d = split.a * split.b;
    std::uniform_real_distribution<double> unit;
    const CMatrix u = random_unitary(d, rng);
    Eigen::VectorXd lambda(static_cast<Eigen::Index>(d));
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        lambda(k) = unit(rng);
    }
    const CMatrix m = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
    return Effect(OperatorMatrix(m, split));
}

/**
 * @brief n random positive operators G_k conjugated by the inverse square
 * root of their sum, so that the outcomes sum to the identity.
 */
inline auto random_povm(DimSplit split, std::size_t n_outcomes, Rng &rng)
    -> Povm {
    const std::size_t d = split.a * split.b;
    const auto n = static_cast<Eigen::Index>(d);
    std::normal_distribution<double> normal;
    std::vector<CMatrix> g;
    CMatrix sum = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k < n_outcomes; ++k) {
        CMatrix x(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double re = normal(rng);
                const double im = normal(rng);
                x(i, j) = Complex{re, im};
            }
        }
        g.push_back(x * x.adjoint());
        sum += g.back();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sum);
    const CMatrix inv_sqrt =
        solver.eigenvectors() *
        solver.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
        solver.eigenvectors().adjoint();
    std::vector<Effect> effects;
    for (const auto &gk : g) {
        CMatrix a = inv_sqrt * gk * inv_sqrt;
        a = 0.5 * (a + a.adjoint()).eval();
        effects.emplace_back(OperatorMatrix(std::move(a), split));
    }
    return Povm(std::move(effects));
}

} // namespace dualchsh
