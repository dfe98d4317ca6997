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
 * Dual Bell-CHSH quantity D for bipartite binary observables.
 *
 * For local states rho_i^A, rho_j^B and a binary observable M,
 *
 *   E(rho^A, rho^B, M) = alpha_A alpha_B tr[(rho^A - 1/d_A) (x) (rho^B - 1/d_B) M_+1]
 *   D = E00 + E01 + E10 - E11,
 *
 * with alpha_d = d / (d - 1). Separable observables whose M_+1 or M_-1 has
 * trace at most one satisfy |D| <= 2.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "quantum_objects.hpp"
#include "random.hpp"

namespace dualchsh {

inline auto alpha(std::size_t d) -> double {
    if (d < 2) {
        throw Error(ErrorCode::DimTooSmall,
                    "alpha_d needs d >= 2, got " + std::to_string(d));
    }
    const auto dd = static_cast<double>(d);
    return dd / (dd - 1.0);
}

/// rho - 1/d.
inline auto centered(const QuantumState &rho) -> OperatorMatrix {
    return rho.op() -
           (1.0 / static_cast<double>(rho.dim())) *
               OperatorMatrix::identity(rho.dim());
}

/// alpha_d tr[(rho - 1/d) X] for any operator X; bounded by 1 for effects.
inline auto ignorance_functional(const QuantumState &rho,
                                 const OperatorMatrix &x) -> double {
    if (rho.dim() != x.dim()) {
        throw Error(ErrorCode::DimMismatch,
                    "state dimension " + std::to_string(rho.dim()) +
                        " vs operator dimension " + std::to_string(x.dim()));
    }
    return alpha(rho.dim()) *
           trace_product(centered(rho).matrix(), x.matrix()).real();
}

/// E(rho, M) = alpha_d tr[(rho - 1/d) M] / 2.
inline auto difference_from_ignorance(const QuantumState &rho,
                                      const BinaryObservable &m) -> double {
    return 0.5 * ignorance_functional(rho, m.expectation());
}

inline auto require_split_for(const BinaryObservable &m, std::size_t da,
                              std::size_t db) -> void {
    const auto &split = m.split();
    if (m.dim() != da * db || (split && *split != DimSplit{da, db})) {
        throw Error(ErrorCode::DimMismatch,
                    "observable does not act on " + std::to_string(da) + "x" +
                        std::to_string(db));
    }
}

/// Bipartite difference from ignorance.
inline auto bipartite_difference(const QuantumState &rho_a,
                                 const QuantumState &rho_b,
                                 const BinaryObservable &m) -> double {
    require_split_for(m, rho_a.dim(), rho_b.dim());
    const OperatorMatrix x = kron(centered(rho_a), centered(rho_b));
    return 0.5 * alpha(rho_a.dim()) * alpha(rho_b.dim()) *
           trace_product(x.matrix(), m.expectation().matrix()).real();
}

/**
 * @brief Two local state pairs and a bipartite binary observable.
 */
class ChshSetting {
  public:
    ChshSetting(std::array<QuantumState, 2> rho_a,
                std::array<QuantumState, 2> rho_b, BinaryObservable observable)
        : rho_a_(std::move(rho_a)), rho_b_(std::move(rho_b)),
          observable_(attach_split(observable, rho_a_[0].dim(),
                                   rho_b_[0].dim())) {
        if (rho_a_[0].dim() != rho_a_[1].dim() ||
            rho_b_[0].dim() != rho_b_[1].dim()) {
            throw Error(ErrorCode::DimMismatch,
                        "local states in a pair have different dimensions");
        }
    }

    [[nodiscard]] auto rho_a() const noexcept
        -> const std::array<QuantumState, 2> & {
        return rho_a_;
    }
    [[nodiscard]] auto rho_b() const noexcept
        -> const std::array<QuantumState, 2> & {
        return rho_b_;
    }
    [[nodiscard]] auto observable() const noexcept -> const BinaryObservable & {
        return observable_;
    }
    [[nodiscard]] auto dims() const noexcept -> DimSplit {
        return {rho_a_[0].dim(), rho_b_[0].dim()};
    }

  private:
    static auto attach_split(const BinaryObservable &m, std::size_t da,
                             std::size_t db) -> BinaryObservable {
        require_split_for(m, da, db);
        if (m.split()) {
            return m;
        }
        return BinaryObservable::from_plus(m.plus().with_split({da, db}));
    }

    std::array<QuantumState, 2> rho_a_;
    std::array<QuantumState, 2> rho_b_;
    BinaryObservable observable_;
};

/// Signs of the four terms: +E00 + E01 + E10 - E11.
constexpr auto chsh_sign(std::size_t i, std::size_t j) -> double {
    return (i == 1 && j == 1) ? -1.0 : 1.0;
}

/// The four terms E_ij indexed [i][j].
inline auto d_terms(const ChshSetting &s)
    -> std::array<std::array<double, 2>, 2> {
    std::array<std::array<double, 2>, 2> e{};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            e[i][j] = bipartite_difference(s.rho_a()[i], s.rho_b()[j],
                                           s.observable());
        }
    }
    return e;
}

inline auto d_value(const ChshSetting &s) -> double {
    const auto e = d_terms(s);
    return e[0][0] + e[0][1] + e[1][0] - e[1][1];
}

/// Margin above 2 required before a D value counts as a violation.
inline constexpr double kViolationTol = 1e-9;

/// tr(M_+1) <= 1 or tr(M_-1) <= 1.
inline auto check_trace_condition(const BinaryObservable &m) -> bool {
    return m.plus().trace() <= 1.0 + kValidationTol ||
           m.minus().trace() <= 1.0 + kValidationTol;
}

/// Correlation matrix t^{nm} = tr(sigma_n (x) sigma_m M_+1), n, m = x, y, z.
struct TMatrix {
    RealMatrix3 t;
};

inline auto require_two_qubit(const Effect &m1) -> Effect {
    if (m1.dim() != 4 || (m1.op().split() && *m1.op().split() != DimSplit{2, 2})) {
        throw Error(ErrorCode::NotTwoQubit,
                    "expected a 2x2 bipartite effect, got dimension " +
                        std::to_string(m1.dim()));
    }
    return m1.op().split() ? m1 : m1.with_split({2, 2});
}

inline auto t_matrix(const Effect &m1) -> TMatrix {
    const Effect e = require_two_qubit(m1);
    TMatrix out{RealMatrix3::Zero()};
    for (int n = 1; n <= 3; ++n) {
        for (int m = 1; m <= 3; ++m) {
            out.t(n - 1, m - 1) =
                trace_product(kron(pauli(n), pauli(m)).matrix(), e.matrix())
                    .real();
        }
    }
    return out;
}

enum class MaxDMethod { ClosedForm, Seesaw };

constexpr auto to_string(MaxDMethod m) -> std::string_view {
    return m == MaxDMethod::ClosedForm ? "closed_form" : "seesaw";
}

struct MaxDReport {
    double max_d;
    ChshSetting optimal_setting;
    MaxDMethod method;
    std::size_t iterations;
    bool converged;
};

/**
 * @brief Closed-form maximum of D over qubit states: 2 sqrt(s1^2 + s2^2)
 * with s1 >= s2 the largest singular values of T.
 *
 * With T = U S V^T and tan(theta) = s2 / s1 the maximizer is
 * a0 = u1, a1 = u2, b0/b1 = cos(theta) v1 +- sin(theta) v2.
 */
inline auto max_d_qubit(const Effect &m1) -> MaxDReport {
    const Effect e = require_two_qubit(m1);
    const BinaryObservable m = BinaryObservable::from_plus(e);
    if (!check_trace_condition(m)) {
        throw Error(ErrorCode::TraceConditionViolated,
                    "tr(M_+1) = " + std::to_string(e.trace()) +
                        " and tr(M_-1) = " + std::to_string(4.0 - e.trace()) +
                        " both exceed 1; renormalize first");
    }
    const Svd3 svd = svd3(t_matrix(e).t);
    const double s1 = svd.s(0);
    const double s2 = svd.s(1);
    const double r = std::hypot(s1, s2);
    const double c = r > 0.0 ? s1 / r : 1.0;
    const double s = r > 0.0 ? s2 / r : 0.0;
    const RealVector3 u1 = svd.u.col(0);
    const RealVector3 u2 = svd.u.col(1);
    const RealVector3 v1 = svd.v.col(0);
    const RealVector3 v2 = svd.v.col(1);
    const RealVector3 b0 = (c * v1 + s * v2).normalized();
    const RealVector3 b1 = (c * v1 - s * v2).normalized();
    ChshSetting setting(
        {bloch_to_state(BlochVector::from_eigen(u1)),
         bloch_to_state(BlochVector::from_eigen(u2))},
        {bloch_to_state(BlochVector::from_eigen(b0)),
         bloch_to_state(BlochVector::from_eigen(b1))},
        m);
    return {2.0 * r, std::move(setting), MaxDMethod::ClosedForm, 0, true};
}

struct SeesawOptions {
    std::size_t restarts = 16;
    std::size_t max_iters = 200;
    double tol = 1e-10;
    std::uint64_t seed = 0;
};

namespace detail {

/// Pure state maximizing tr(rho K) for Hermitian K.
inline auto top_eigenstate(const OperatorMatrix &k) -> QuantumState {
    const EigenDecomposition eig = hermitian_eig(k);
    return pure_state(eig.vectors.col(0));
}

/// tr_B[(1 (x) Y) M1] as an operator on A.
inline auto contract_b(const OperatorMatrix &m1, const OperatorMatrix &y,
                       DimSplit split) -> OperatorMatrix {
    const OperatorMatrix lifted = kron(OperatorMatrix::identity(split.a), y);
    return symmetrized(partial_trace(lifted * m1, Subsystem::B));
}

/// tr_A[(X (x) 1) M1] as an operator on B.
inline auto contract_a(const OperatorMatrix &m1, const OperatorMatrix &x,
                       DimSplit split) -> OperatorMatrix {
    const OperatorMatrix lifted = kron(x, OperatorMatrix::identity(split.b));
    return symmetrized(partial_trace(lifted * m1, Subsystem::A));
}

} // namespace detail

/**
 * @brief Alternating maximization of D over the four local states.
 *
 * D is linear in each state. With the B pair fixed, rho_0^A maximizes
 * tr[rho K0] with K0 = tr_B[(1 (x) (Y0 + Y1)) M_+1] and rho_1^A uses
 * Y0 - Y1, where Y_j = alpha_B (rho_j^B - 1/d_B); the B update is
 * symmetric. Each step is solved by a top eigenvector, so D never
 * decreases within a restart.
 */
inline auto maximize_d_seesaw(const BinaryObservable &observable,
                              DimSplit split, const SeesawOptions &options = {})
    -> MaxDReport {
    require_split_for(observable, split.a, split.b);
    if (!check_trace_condition(observable)) {
        throw Error(ErrorCode::TraceConditionViolated,
                    "seesaw needs tr(M_+1) <= 1 or tr(M_-1) <= 1");
    }
    if (options.restarts == 0) {
        throw Error(ErrorCode::InvalidArgument, "restarts must be positive");
    }
    const BinaryObservable m =
        observable.split() ? observable
                           : BinaryObservable::from_plus(
                                 observable.plus().with_split(split));
    const OperatorMatrix &m1 = m.plus().op();
    const double alpha_a = alpha(split.a);
    const double alpha_b = alpha(split.b);

    std::optional<MaxDReport> best;
    std::size_t total_iters = 0;
    for (std::size_t restart = 0; restart < options.restarts; ++restart) {
        Rng rng(options.seed + restart);
        std::array<QuantumState, 2> a{random_pure_state(split.a, rng),
                                      random_pure_state(split.a, rng)};
        std::array<QuantumState, 2> b{random_pure_state(split.b, rng),
                                      random_pure_state(split.b, rng)};
        double current = d_value(ChshSetting(a, b, m));
        bool converged = false;
        std::size_t iter = 0;
        while (iter < options.max_iters) {
            ++iter;
            const OperatorMatrix y0 = alpha_b * centered(b[0]);
            const OperatorMatrix y1 = alpha_b * centered(b[1]);
            a = {detail::top_eigenstate(detail::contract_b(m1, y0 + y1, split)),
                 detail::top_eigenstate(detail::contract_b(m1, y0 - y1, split))};
            const OperatorMatrix x0 = alpha_a * centered(a[0]);
            const OperatorMatrix x1 = alpha_a * centered(a[1]);
            b = {detail::top_eigenstate(detail::contract_a(m1, x0 + x1, split)),
                 detail::top_eigenstate(detail::contract_a(m1, x0 - x1, split))};
            const double next = d_value(ChshSetting(a, b, m));
            const double delta = next - current;
            current = std::max(current, next);
            if (std::abs(delta) < options.tol) {
                converged = true;
                break;
            }
        }
        total_iters += iter;
        if (!best || current > best->max_d) {
            best.emplace(MaxDReport{current, ChshSetting(a, b, m),
                                    MaxDMethod::Seesaw, iter, converged});
        }
    }
    best->iterations = total_iters;
    return *best;
}

/// S = sum_ij (-1)^{ij} alpha_A alpha_B (rho_i^A - 1/d_A) (x) (rho_j^B - 1/d_B).
inline auto chsh_operator(const std::array<QuantumState, 2> &rho_a,
                          const std::array<QuantumState, 2> &rho_b)
    -> OperatorMatrix {
    if (rho_a[0].dim() != rho_a[1].dim() || rho_b[0].dim() != rho_b[1].dim()) {
        throw Error(ErrorCode::DimMismatch,
                    "local states in a pair have different dimensions");
    }
    const double scale = alpha(rho_a[0].dim()) * alpha(rho_b[0].dim());
    const std::size_t d = rho_a[0].dim() * rho_b[0].dim();
    OperatorMatrix s = OperatorMatrix::zero(d, DimSplit{rho_a[0].dim(), rho_b[0].dim()});
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            s = s + (chsh_sign(i, j) * scale) *
                        kron(centered(rho_a[i]), centered(rho_b[j]));
        }
    }
    return s;
}

/// sqrt(||S^2||); bounds |D| for every observable meeting the trace condition.
inline auto dual_tsirelson(const std::array<QuantumState, 2> &rho_a,
                           const std::array<QuantumState, 2> &rho_b) -> double {
    const OperatorMatrix s = chsh_operator(rho_a, rho_b);
    return std::sqrt(operator_norm(s * s));
}

} // namespace dualchsh
