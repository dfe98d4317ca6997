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
 * Independent reference computations for the test suites. Nothing here
 * calls into the library's numerical routines beyond its value types.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Sum_ij A_ij B_ji by explicit loops.
inline auto trace_of_product(const CMatrix &a, const CMatrix &b) -> Complex {
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            sum += a(i, j) * b(j, i);
        }
    }
    return sum;
}

/// Kronecker product from the index formula (A slow, B fast).
inline auto kron(const CMatrix &a, const CMatrix &b) -> CMatrix {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
        }
    }
    return out;
}

inline auto pauli(int n) -> CMatrix {
    CMatrix m = CMatrix::Zero(2, 2);
    const Complex i{0.0, 1.0};
    if (n == 0) {
        m(0, 0) = 1;
        m(1, 1) = 1;
    } else if (n == 1) {
        m(0, 1) = 1;
        m(1, 0) = 1;
    } else if (n == 2) {
        m(0, 1) = -i;
        m(1, 0) = i;
    } else {
        m(0, 0) = 1;
        m(1, 1) = -1;
    }
    return m;
}

/// Correlation matrix by explicit Pauli traces.
inline auto t_matrix(const CMatrix &m1) -> Eigen::Matrix3d {
    Eigen::Matrix3d t;
    for (int n = 1; n <= 3; ++n) {
        for (int m = 1; m <= 3; ++m) {
            t(n - 1, m - 1) = trace_of_product(kron(pauli(n), pauli(m)), m1).real();
        }
    }
    return t;
}

/// alpha_A alpha_B tr[(rho_a - 1/d_A) (x) (rho_b - 1/d_B) M1] from loops.
inline auto bipartite_e(const CMatrix &rho_a, const CMatrix &rho_b, const CMatrix &m1)
    -> double {
    const auto da = static_cast<double>(rho_a.rows());
    const auto db = static_cast<double>(rho_b.rows());
    const CMatrix ca = rho_a - CMatrix::Identity(rho_a.rows(), rho_a.rows()) / da;
    const CMatrix cb = rho_b - CMatrix::Identity(rho_b.rows(), rho_b.rows()) / db;
    return (da / (da - 1.0)) * (db / (db - 1.0)) *
           trace_of_product(kron(ca, cb), m1).real();
}

inline auto bell_vector(int k) -> CVector {
    const double h = 1.0 / std::sqrt(2.0);
    CVector v = CVector::Zero(4);
    if (k == 0) {
        v << h, 0, 0, h;
    } else if (k == 1) {
        v << h, 0, 0, -h;
    } else if (k == 2) {
        v << 0, h, h, 0;
    } else {
        v << 0, h, -h, 0;
    }
    return v;
}

/// Qubit ket with Bloch vector (x, y, z), |r| = 1.
inline auto bloch_ket(double x, double y, double z) -> CVector {
    const double theta = std::acos(std::clamp(z, -1.0, 1.0));
    const double phase = std::atan2(y, x);
    CVector v(2);
    v << std::cos(theta / 2.0), std::polar(1.0, phase) * std::sin(theta / 2.0);
    return v;
}

/// Fibonacci lattice on the unit sphere.
inline auto sphere_grid(std::size_t n) -> std::vector<std::array<double, 3>> {
    std::vector<std::array<double, 3>> pts;
    const double golden = M_PI * (1.0 + std::sqrt(5.0));
    for (std::size_t k = 0; k < n; ++k) {
        const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        const double z = 1.0 - 2.0 * t;
        const double r = std::sqrt(1.0 - z * z);
        const double phi = golden * (static_cast<double>(k) + 0.5);
        pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return pts;
}

/**
 * Ideal-resource teleportation with a complete Bell measurement:
 * |phi>|Phi+> = 1/2 sum_B |B> (x) P_B |phi> with P = 1, Z, X, XZ, so
 * F(phi) = 1/4 sum_B |<phi|U_B P_B|phi>|^2.
 */
inline auto bell_teleport_fidelity(const std::array<CMatrix, 4> &u, const CVector &phi)
    -> double {
    const std::array<CMatrix, 4> p{pauli(0), pauli(3), pauli(1), pauli(1) * pauli(3)};
    double f = 0.0;
    for (int k = 0; k < 4; ++k) {
        f += 0.25 * std::norm((phi.adjoint() * u[k] * p[k] * phi)(0));
    }
    return f;
}

} // namespace oracle
