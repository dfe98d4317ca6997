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
 * Positivity tests for bipartite operators (positive, PPT, POPT) and an
 * effect classifier built on them and on the dual Bell-CHSH inequality.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "dual_chsh.hpp"
#include "random.hpp"

namespace dualchsh {

inline auto is_positive(const OperatorMatrix &x) -> bool {
    return min_eigenvalue(x) >= -kValidationTol;
}

struct PptResult {
    bool ppt;
    double min_eigenvalue; ///< of the partial transpose on B
};

inline auto ppt_check(const OperatorMatrix &x) -> PptResult {
    const double lowest = min_eigenvalue(partial_transpose(x, Subsystem::B));
    return {lowest >= -kValidationTol, lowest};
}

struct PoptOptions {
    std::size_t restarts = 32;
    std::size_t max_iters = 500;
    double tol = 1e-12;
    std::uint64_t seed = 0;
};

struct PoptResult {
    double min_value; ///< upper bound on min <psi (x) phi|X|psi (x) phi>
    CVector psi;
    CVector phi;
    bool converged;
};

/**
 * @brief Seesaw minimization of <psi (x) phi|X|psi (x) phi> over unit
 * vectors.
 *
 * Heuristic: the returned value can overestimate the true minimum when
 * every restart stalls in a local minimum.
 */
inline auto popt_min(const OperatorMatrix &x, const PoptOptions &options = {})
    -> PoptResult {
    const DimSplit split = x.require_split();
    const OperatorMatrix h = symmetrized(x);
    const auto da = static_cast<Eigen::Index>(split.a);
    const auto db = static_cast<Eigen::Index>(split.b);
    auto lift_b = [&](const CVector &phi) {
        // columns |i> (x) phi
        CMatrix v = CMatrix::Zero(da * db, da);
        for (Eigen::Index i = 0; i < da; ++i) {
            v.block(i * db, i, db, 1) = phi;
        }
        return v;
    };
    auto lift_a = [&](const CVector &psi) {
        CMatrix v = CMatrix::Zero(da * db, db);
        for (Eigen::Index i = 0; i < da; ++i) {
            v.block(i * db, 0, db, db) = psi(i) * CMatrix::Identity(db, db);
        }
        return v;
    };
    auto bottom = [](const CMatrix &k) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (k + k.adjoint()));
        return std::pair<double, CVector>{solver.eigenvalues()(0),
                                          solver.eigenvectors().col(0)};
    };

    std::optional<PoptResult> best;
    for (std::size_t restart = 0; restart < options.restarts; ++restart) {
        Rng rng(options.seed + restart);
        CVector psi = random_unit_vector(split.a, rng);
        CVector phi = random_unit_vector(split.b, rng);
        double current =
            (kron(psi, phi).adjoint() * h.matrix() * kron(psi, phi))(0).real();
        bool converged = false;
        for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
            const CMatrix vb = lift_b(phi);
            psi = bottom(vb.adjoint() * h.matrix() * vb).second;
            const CMatrix va = lift_a(psi);
            auto [value, next_phi] = bottom(va.adjoint() * h.matrix() * va);
            phi = next_phi;
            const double delta = current - value;
            current = std::min(current, value);
            if (std::abs(delta) < options.tol) {
                converged = true;
                break;
            }
        }
        if (!best || current < best->min_value) {
            best.emplace(PoptResult{current, psi, phi, converged});
        }
    }
    return *best;
}

/// M_+1 = sum_i lambda_i P_i^A (x) P_i^B with rank-one projectors.
struct SeparableDecomposition {
    struct Term {
        double weight;
        Effect a;
        Effect b;
    };

    DimSplit split;
    std::vector<Term> terms;

    [[nodiscard]] auto total_weight() const -> double {
        double sum = 0.0;
        for (const auto &t : terms) {
            sum += t.weight;
        }
        return sum;
    }

    [[nodiscard]] auto reconstruct() const -> OperatorMatrix {
        OperatorMatrix out = OperatorMatrix::zero(split.a * split.b, split);
        for (const auto &t : terms) {
            out = out + t.weight * kron(t.a.op(), t.b.op());
        }
        return out;
    }
};

/**
 * @brief Random separable effect: n_terms rank-one product projectors with
 * weights drawn uniformly from the simplex and scaled to trace_budget.
 */
inline auto random_separable_effect(DimSplit split, std::size_t n_terms,
                                    double trace_budget, Rng &rng)
    -> std::pair<Effect, SeparableDecomposition> {
    if (trace_budget > 1.0 || trace_budget < 0.0) {
        throw Error(ErrorCode::BudgetExceeded,
                    "trace budget must lie in [0, 1], got " +
                        std::to_string(trace_budget));
    }
    if (n_terms == 0) {
        throw Error(ErrorCode::InvalidArgument, "n_terms must be positive");
    }
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(n_terms);
    double total = 0.0;
    for (auto &wi : w) {
        wi = expo(rng);
        total += wi;
    }
    SeparableDecomposition dec{split, {}};
    for (std::size_t k = 0; k < n_terms; ++k) {
        Effect pa(OperatorMatrix::projector(random_unit_vector(split.a, rng)));
        Effect pb(OperatorMatrix::projector(random_unit_vector(split.b, rng)));
        dec.terms.push_back({trace_budget * w[k] / total, pa, pb});
    }
    Effect effect(dec.reconstruct());
    return {std::move(effect), std::move(dec)};
}

inline auto random_separable_effect(DimSplit split, std::size_t n_terms,
                                    double trace_budget, std::uint64_t seed)
    -> std::pair<Effect, SeparableDecomposition> {
    Rng rng(seed);
    return random_separable_effect(split, n_terms, trace_budget, rng);
}

enum class Verdict { Separable, Entangled, Inconclusive };

constexpr auto to_string(Verdict v) -> std::string_view {
    switch (v) {
    case Verdict::Separable:
        return "Separable";
    case Verdict::Entangled:
        return "Entangled";
    case Verdict::Inconclusive:
        return "Inconclusive";
    }
    return "?";
}

enum class Evidence {
    None,
    PptExact,          ///< 2x2 PPT, which is exact at this size
    PptViolation,      ///< negative partial-transpose eigenvalue
    DualChshViolation, ///< D > 2 on an explicit setting
};

constexpr auto to_string(Evidence e) -> std::string_view {
    switch (e) {
    case Evidence::None:
        return "none";
    case Evidence::PptExact:
        return "ppt_exact_2x2";
    case Evidence::PptViolation:
        return "ppt_violation";
    case Evidence::DualChshViolation:
        return "dual_chsh_violation";
    }
    return "?";
}

struct PptEvidence {
    double min_eigenvalue; ///< of the partial transpose of M_+1
    double normalization;  ///< 1 / tr(M_+1), applied for the 2x2 argument
    double normalized_min_eigenvalue;
};

struct DualChshEvidence {
    double max_d;
    ChshSetting setting;
    MaxDMethod method;
    bool converged;
};

struct Classification {
    Verdict verdict;
    Evidence evidence;
    bool renormalized;
    Effect effect; ///< effect actually classified, after renormalization
    PptEvidence ppt;
    std::optional<DualChshEvidence> dual_chsh;
    bool violates_dual_chsh;
};

/**
 * @brief Decision cascade for an effect M_+1 with a bipartite split.
 *
 * 1. Coarse-grain so the trace condition holds.
 * 2. At 2x2, PPT decides; max D comes from the closed form.
 * 3. Otherwise NPT certifies entanglement, a seesaw value D > 2 does too,
 *    and anything else is Inconclusive.
 */
inline auto classify_effect(const Effect &m1,
                            const SeesawOptions &seesaw = {}) -> Classification {
    const DimSplit split = m1.op().require_split();
    const BinaryObservable original = BinaryObservable::from_plus(m1);
    const BinaryObservable m = renormalize_effect(original);
    const bool renormalized = max_abs_diff(m.plus().op(), m1.op()) != 0.0;
    const Effect &effect = m.plus();

    const PptResult ppt = ppt_check(effect.op());
    const double tr = effect.trace();
    const double normalization = tr > 0.0 ? 1.0 / tr : 1.0;
    const PptEvidence ppt_evidence{ppt.min_eigenvalue, normalization,
                                   ppt.min_eigenvalue * normalization};

    if (split == DimSplit{2, 2}) {
        MaxDReport report = max_d_qubit(effect);
        const bool violates = report.max_d > 2.0 + kViolationTol;
        DualChshEvidence dc{report.max_d, std::move(report.optimal_setting),
                            report.method, report.converged};
        return {ppt.ppt ? Verdict::Separable : Verdict::Entangled,
                ppt.ppt ? Evidence::PptExact : Evidence::PptViolation,
                renormalized,
                effect,
                ppt_evidence,
                std::move(dc),
                violates};
    }

    MaxDReport report = maximize_d_seesaw(m, split, seesaw);
    const bool violates = report.max_d > 2.0 + kViolationTol;
    DualChshEvidence dc{report.max_d, std::move(report.optimal_setting),
                        report.method, report.converged};
    Verdict verdict = Verdict::Inconclusive;
    Evidence evidence = Evidence::None;
    if (!ppt.ppt) {
        verdict = Verdict::Entangled;
        evidence = Evidence::PptViolation;
    } else if (violates) {
        verdict = Verdict::Entangled;
        evidence = Evidence::DualChshViolation;
    }
    return {verdict,      evidence,     renormalized, effect,
            ppt_evidence, std::move(dc), violates};
}

} // namespace dualchsh
