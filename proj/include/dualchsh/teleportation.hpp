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
 * Teleportation usefulness of a four-outcome two-qubit POVM used as
 * Alice's (possibly incomplete) Bell measurement on a shared |Phi+>.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dual_chsh.hpp"
#include "random.hpp"

namespace dualchsh {

inline auto require_teleportation_povm(const Povm &povm) -> void {
    if (povm.size() != 4) {
        throw Error(ErrorCode::WrongOutcomeCount,
                    "teleportation needs 4 outcomes, got " +
                        std::to_string(povm.size()));
    }
    if (povm.dim() != 4) {
        throw Error(ErrorCode::NotTwoQubit,
                    "teleportation POVM must act on two qubits");
    }
}

inline auto t_matrices(const Povm &povm) -> std::array<RealMatrix3, 4> {
    require_teleportation_povm(povm);
    std::array<RealMatrix3, 4> out;
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = t_matrix(povm[i]).t;
    }
    return out;
}

struct FidelityReport {
    double f_max;
    std::array<double, 4> nuclear_norms;
    bool useful;
    double threshold_margin; ///< sum of nuclear norms minus 4
};

/// F_max = (1 + sum_i tr sqrt(T_i^T T_i) / 12) / 2; useful when above 2/3.
inline auto max_average_fidelity(const Povm &povm) -> FidelityReport {
    const auto ts = t_matrices(povm);
    FidelityReport report{};
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        report.nuclear_norms[i] = nuclear_norm(ts[i]);
        sum += report.nuclear_norms[i];
    }
    report.f_max = 0.5 * (1.0 + sum / 12.0);
    report.threshold_margin = sum - 4.0;
    report.useful = report.threshold_margin > 0.0;
    return report;
}

struct McEstimate {
    double estimate;
    double std_error;
    std::size_t n_samples;
};

inline auto check_unitary(const CMatrix &u) -> void {
    if (u.rows() != 2 || u.cols() != 2) {
        throw Error(ErrorCode::NotUnitary, "feedback unitaries must be 2x2");
    }
    const double defect =
        max_abs_diff(CMatrix(u.adjoint() * u), CMatrix::Identity(2, 2));
    if (defect > 1e-9) {
        throw Error(ErrorCode::NotUnitary,
                    "U^dagger U differs from identity by " +
                        std::to_string(defect));
    }
}

/**
 * @brief sum_i p_i <phi|rho_i|phi> for one input state.
 *
 * Qubit order: Alice's input, Alice's half of |Phi+>, Bob's half.
 * p_i rho_i = tr_A[(1 (x) U_i)(|phi><phi| (x) |Phi+><Phi+|)(A_i (x) 1)(1 (x) U_i^dagger)].
 */
inline auto teleportation_fidelity(const Povm &povm,
                                   const std::array<CMatrix, 4> &unitaries,
                                   const CVector &phi) -> double {
    const CVector input = kron(phi, bell_vector(BellOutcome::PhiPlus));
    const CMatrix joint = input * input.adjoint();
    const OperatorMatrix id2 = OperatorMatrix::identity(2);
    const OperatorMatrix id4 = OperatorMatrix::identity(4);
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const CMatrix lifted_a = kron(povm[i].op(), id2).matrix();
        const CMatrix lifted_u = kron(id4, OperatorMatrix(unitaries[i])).matrix();
        const CMatrix out =
            lifted_u * joint * lifted_a * lifted_u.adjoint();
        const OperatorMatrix bob =
            partial_trace(OperatorMatrix(out, DimSplit{4, 2}), Subsystem::A);
        total += (phi.adjoint() * bob.matrix() * phi)(0).real();
    }
    return total;
}

/// Monte Carlo average fidelity with inputs uniform on the Bloch sphere.
inline auto average_fidelity_mc(const Povm &povm,
                                const std::array<CMatrix, 4> &unitaries,
                                std::size_t n_samples, std::uint64_t seed)
    -> McEstimate {
    require_teleportation_povm(povm);
    for (const auto &u : unitaries) {
        check_unitary(u);
    }
    if (n_samples == 0) {
        throw Error(ErrorCode::InvalidArgument, "n_samples must be positive");
    }
    Rng rng(seed);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const BlochVector r = random_bloch_sphere(rng);
        const EigenDecomposition eig = hermitian_eig(bloch_to_state(r).op());
        const double f = teleportation_fidelity(povm, unitaries, eig.vectors.col(0));
        const double delta = f - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (f - mean);
    }
    const double n = static_cast<double>(n_samples);
    const double variance = n_samples > 1 ? m2 / (n - 1.0) : 0.0;
    return {mean, std::sqrt(std::max(variance, 0.0) / n), n_samples};
}

/// Bob's corrections 1, sigma_z, sigma_x, sigma_z sigma_x for the Bell POVM.
inline auto standard_corrections() -> std::array<CMatrix, 4> {
    return {pauli(0).matrix(), pauli(3).matrix(), pauli(1).matrix(),
            (pauli(3) * pauli(1)).matrix()};
}

struct LinkEntry {
    bool violates;       ///< max D > 2 after coarse-graining
    double max_d;
    double nuclear_norm; ///< of T for the coarse-grained effect
    bool renormalized;
};

/// Per outcome: dual-CHSH violation and the nuclear norm it forces above 1.
inline auto dual_chsh_link(const Povm &povm) -> std::array<LinkEntry, 4> {
    require_teleportation_povm(povm);
    std::array<LinkEntry, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto original = BinaryObservable::from_plus(povm[i]);
        const auto m = renormalize_effect(original);
        const Effect &e = m.plus();
        const MaxDReport report = max_d_qubit(e);
        out[i] = {report.max_d > 2.0 + kViolationTol, report.max_d,
                  nuclear_norm(t_matrix(e).t),
                  max_abs_diff(e.op(), povm[i].op()) != 0.0};
    }
    return out;
}

} // namespace dualchsh
