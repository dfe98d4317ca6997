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
 * Validated states, effects, binary observables and POVMs, plus the Bloch
 * map for qubits and the Bell basis.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace dualchsh {

/// Slack on eigenvalue bounds and traces used by every validator.
inline constexpr double kValidationTol = 1e-9;

/**
 * @brief Density operator: Hermitian, positive semidefinite, unit trace.
 *
 * The stored matrix is the symmetrized input.
 */
class QuantumState {
  public:
    explicit QuantumState(const OperatorMatrix &op) : op_(symmetrized(op)) {
        const double lowest = min_eigenvalue(op_);
        if (lowest < -kValidationTol) {
            throw Error(ErrorCode::InvalidState,
                        "state has negative eigenvalue " +
                            std::to_string(lowest));
        }
        const Complex tr = op_.trace();
        if (std::abs(tr - Complex{1.0, 0.0}) > kValidationTol) {
            throw Error(ErrorCode::InvalidState,
                        "state trace is " + std::to_string(tr.real()) +
                            ", expected 1");
        }
    }

    [[nodiscard]] auto op() const noexcept -> const OperatorMatrix & {
        return op_;
    }
    [[nodiscard]] auto matrix() const noexcept -> const CMatrix & {
        return op_.matrix();
    }
    [[nodiscard]] auto dim() const noexcept -> std::size_t { return op_.dim(); }

  private:
    OperatorMatrix op_;
};

/**
 * @brief Operator X with 0 <= X <= 1.
 */
class Effect {
  public:
    explicit Effect(const OperatorMatrix &op) : op_(symmetrized(op)) {
        const Eigen::VectorXd ev = eigenvalues(op_);
        if (ev.minCoeff() < -kValidationTol ||
            ev.maxCoeff() > 1.0 + kValidationTol) {
            throw Error(ErrorCode::InvalidEffect,
                        "effect spectrum [" + std::to_string(ev.minCoeff()) +
                            ", " + std::to_string(ev.maxCoeff()) +
                            "] leaves [0, 1]");
        }
    }

    [[nodiscard]] auto op() const noexcept -> const OperatorMatrix & {
        return op_;
    }
    [[nodiscard]] auto matrix() const noexcept -> const CMatrix & {
        return op_.matrix();
    }
    [[nodiscard]] auto dim() const noexcept -> std::size_t { return op_.dim(); }
    [[nodiscard]] auto trace() const -> double { return op_.trace().real(); }
    [[nodiscard]] auto with_split(DimSplit split) const -> Effect {
        return Effect(op_.with_split(split));
    }
    /// 1 - X.
    [[nodiscard]] auto complement() const -> Effect {
        return Effect(OperatorMatrix::identity(dim(), op_.split()) - op_);
    }

  private:
    OperatorMatrix op_;
};

/**
 * @brief Two-outcome observable {M_+1, M_-1} with M_+1 + M_-1 = 1.
 */
class BinaryObservable {
  public:
    BinaryObservable(Effect m_plus, Effect m_minus)
        : m_plus_(std::move(m_plus)), m_minus_(std::move(m_minus)) {
        if (m_plus_.dim() != m_minus_.dim()) {
            throw Error(ErrorCode::DimMismatch,
                        "observable elements have different dimensions");
        }
        const double defect =
            max_abs_diff((m_plus_.op() + m_minus_.op()).matrix(),
                         CMatrix::Identity(static_cast<Eigen::Index>(dim()),
                                           static_cast<Eigen::Index>(dim())));
        if (defect > kValidationTol) {
            throw Error(ErrorCode::InvalidObservable,
                        "M_+1 + M_-1 differs from identity by " +
                            std::to_string(defect));
        }
    }

    static auto from_plus(const Effect &m_plus) -> BinaryObservable {
        return {m_plus, m_plus.complement()};
    }

    /// Builds the observable from its expectation operator M = 2 M_+1 - 1.
    static auto from_expectation(const OperatorMatrix &m) -> BinaryObservable {
        const OperatorMatrix plus =
            0.5 * (m + OperatorMatrix::identity(m.dim(), m.split()));
        try {
            return from_plus(Effect(plus));
        } catch (const Error &e) {
            if (e.code() == ErrorCode::InvalidEffect) {
                throw Error(ErrorCode::InvalidObservable,
                            "expectation operator spectrum leaves [-1, 1]");
            }
            throw;
        }
    }

    [[nodiscard]] auto plus() const noexcept -> const Effect & {
        return m_plus_;
    }
    [[nodiscard]] auto minus() const noexcept -> const Effect & {
        return m_minus_;
    }
    [[nodiscard]] auto dim() const noexcept -> std::size_t {
        return m_plus_.dim();
    }
    [[nodiscard]] auto split() const noexcept -> const std::optional<DimSplit> & {
        return m_plus_.op().split();
    }
    [[nodiscard]] auto expectation() const -> OperatorMatrix {
        return m_plus_.op() - m_minus_.op();
    }

  private:
    Effect m_plus_;
    Effect m_minus_;
};

/// Finite collection of effects summing to the identity.
class Povm {
  public:
    explicit Povm(std::vector<Effect> effects) : effects_(std::move(effects)) {
        if (effects_.empty()) {
            throw Error(ErrorCode::InvalidPovm, "POVM has no elements");
        }
        const std::size_t d = effects_.front().dim();
        CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(d),
                                    static_cast<Eigen::Index>(d));
        for (const auto &e : effects_) {
            if (e.dim() != d) {
                throw Error(ErrorCode::DimMismatch,
                            "POVM elements have different dimensions");
            }
            sum += e.matrix();
        }
        const double defect = max_abs_diff(
            sum, CMatrix::Identity(static_cast<Eigen::Index>(d),
                                   static_cast<Eigen::Index>(d)));
        if (defect > kValidationTol) {
            throw Error(ErrorCode::InvalidPovm,
                        "POVM elements sum differs from identity by " +
                            std::to_string(defect));
        }
    }

    [[nodiscard]] auto effects() const noexcept -> const std::vector<Effect> & {
        return effects_;
    }
    [[nodiscard]] auto size() const noexcept -> std::size_t {
        return effects_.size();
    }
    [[nodiscard]] auto dim() const noexcept -> std::size_t {
        return effects_.front().dim();
    }
    [[nodiscard]] auto operator[](std::size_t i) const -> const Effect & {
        return effects_.at(i);
    }

  private:
    std::vector<Effect> effects_;
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] auto norm() const -> double {
        return std::sqrt(x * x + y * y + z * z);
    }
    [[nodiscard]] auto as_eigen() const -> RealVector3 { return {x, y, z}; }
    static auto from_eigen(const RealVector3 &v) -> BlochVector {
        return {v(0), v(1), v(2)};
    }
};

/**
 * @brief Generalized Born rule tr(rho E).
 *
 * Values within the validation slack outside [0, 1] are clamped.
 */
inline auto born_probability(const QuantumState &state, const Effect &effect)
    -> double {
    if (state.dim() != effect.dim()) {
        throw Error(ErrorCode::DimMismatch,
                    "state dimension " + std::to_string(state.dim()) +
                        " vs effect dimension " +
                        std::to_string(effect.dim()));
    }
    const double p = trace_product(state.matrix(), effect.matrix()).real();
    if (p < -kValidationTol || p > 1.0 + kValidationTol) {
        throw Error(ErrorCode::ProbabilityOutOfRange,
                    "tr(rho E) = " + std::to_string(p));
    }
    return std::clamp(p, 0.0, 1.0);
}

/// rho = (1 + r . sigma) / 2.
inline auto bloch_to_state(const BlochVector &r) -> QuantumState {
    if (r.norm() > 1.0 + kValidationTol) {
        throw Error(ErrorCode::BlochNormExceeded,
                    "|r| = " + std::to_string(r.norm()));
    }
    const OperatorMatrix op =
        0.5 * (pauli(0) + r.x * pauli(1) + r.y * pauli(2) + r.z * pauli(3));
    return QuantumState(op);
}

inline auto state_to_bloch(const QuantumState &rho) -> BlochVector {
    if (rho.dim() != 2) {
        throw Error(ErrorCode::NotQubit,
                    "Bloch map needs a qubit, got dimension " +
                        std::to_string(rho.dim()));
    }
    return {hs_inner(pauli(1), rho.op()).real(),
            hs_inner(pauli(2), rho.op()).real(),
            hs_inner(pauli(3), rho.op()).real()};
}

inline auto maximally_mixed(std::size_t d) -> QuantumState {
    if (d == 0) {
        throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    }
    return QuantumState((1.0 / static_cast<double>(d)) *
                        OperatorMatrix::identity(d));
}

/// Pure state |v><v| / <v|v>.
inline auto pure_state(const CVector &v) -> QuantumState {
    const double n = v.norm();
    if (n == 0.0) {
        throw Error(ErrorCode::InvalidState, "zero vector");
    }
    return QuantumState(OperatorMatrix::projector(v / n));
}

inline auto basis_ket(std::size_t d, std::size_t k) -> CVector {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return v;
}

/// Bell outcomes in their fixed order Phi+, Phi-, Psi+, Psi-.
enum class BellOutcome { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

inline constexpr std::array<BellOutcome, 4> kBellOutcomes{
    BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
    BellOutcome::PsiMinus};

constexpr auto to_string(BellOutcome o) -> std::string_view {
    switch (o) {
    case BellOutcome::PhiPlus:
        return "Phi+";
    case BellOutcome::PhiMinus:
        return "Phi-";
    case BellOutcome::PsiPlus:
        return "Psi+";
    case BellOutcome::PsiMinus:
        return "Psi-";
    }
    return "?";
}

/// Phi+- = (|00> +- |11>)/sqrt2, Psi+- = (|01> +- |10>)/sqrt2.
inline auto bell_vector(BellOutcome o) -> CVector {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    CVector v = CVector::Zero(4);
    switch (o) {
    case BellOutcome::PhiPlus:
        v(0) = h;
        v(3) = h;
        break;
    case BellOutcome::PhiMinus:
        v(0) = h;
        v(3) = -h;
        break;
    case BellOutcome::PsiPlus:
        v(1) = h;
        v(2) = h;
        break;
    case BellOutcome::PsiMinus:
        v(1) = h;
        v(2) = -h;
        break;
    }
    return v;
}

inline auto bell_projector(BellOutcome o) -> Effect {
    return Effect(OperatorMatrix::projector(bell_vector(o), DimSplit{2, 2}));
}

inline auto bell_state(BellOutcome o) -> QuantumState {
    return QuantumState(
        OperatorMatrix::projector(bell_vector(o), DimSplit{2, 2}));
}

inline auto bell_states() -> std::array<QuantumState, 4> {
    return {bell_state(BellOutcome::PhiPlus), bell_state(BellOutcome::PhiMinus),
            bell_state(BellOutcome::PsiPlus),
            bell_state(BellOutcome::PsiMinus)};
}

inline auto bell_povm() -> Povm {
    std::vector<Effect> effects;
    for (auto o : kBellOutcomes) {
        effects.push_back(bell_projector(o));
    }
    return Povm(std::move(effects));
}

/// Product of local states, carrying the split (d_A, d_B).
inline auto product_state(const QuantumState &a, const QuantumState &b)
    -> QuantumState {
    return QuantumState(kron(a.op(), b.op()));
}

/**
 * @brief Coarse-grains M_+1 to M_+1 / tr(M_+1) when neither element has
 * trace at most one.
 *
 * The +1 outcome is kept with probability 1 / tr(M_+1) and otherwise
 * flipped to -1.
 */
inline auto renormalize_effect(const BinaryObservable &m) -> BinaryObservable {
    const double tr_plus = m.plus().trace();
    const double tr_minus = m.minus().trace();
    if (tr_plus <= 1.0 + kValidationTol || tr_minus <= 1.0 + kValidationTol) {
        return m;
    }
    return BinaryObservable::from_plus(
        Effect((1.0 / tr_plus) * m.plus().op()));
}

} // namespace dualchsh
