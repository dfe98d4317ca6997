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
 * Shot-based simulation of the two-qubit dual Bell-CHSH experiment.
 *
 * Each E term is estimated from four preparations (rho^A, rho^B),
 * (rho^A, 1/2), (1/2, rho^B) and (1/2, 1/2) measured in the Bell basis.
 * Expanding E = 4 tr[(rho^A - 1/2) (x) (rho^B - 1/2) M_+1] gives
 *
 *   E = 4 (p_11 - p_1m - p_m1 + p_mm),
 *
 * where p is the probability of the target Bell outcome. D then needs
 * 16 independent preparation settings.
 *
 * Noise order: per-qubit depolarizing on the joint pre-measurement state,
 * then independent flips of the two readout bits of the Bell circuit
 * (CNOT, H), then decoding into Bell labels.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dual_chsh.hpp"
#include "random.hpp"

namespace dualchsh {

using BellProbs = std::array<double, 4>;

/// Bell-basis outcome distribution in the order Phi+, Phi-, Psi+, Psi-.
inline auto bell_measure_probs(const QuantumState &rho_ab) -> BellProbs {
    if (rho_ab.dim() != 4) {
        throw Error(ErrorCode::NotTwoQubit,
                    "Bell measurement needs a two-qubit state");
    }
    BellProbs p{};
    for (auto o : kBellOutcomes) {
        p[static_cast<std::size_t>(o)] =
            born_probability(rho_ab, bell_projector(o));
    }
    return p;
}

inline auto check_unit_interval(double p, std::string_view name) -> void {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string(name) + " must lie in [0, 1], got " +
                        std::to_string(p));
    }
}

/// (1 - p) rho + p 1/2.
inline auto apply_depolarizing(const QuantumState &rho, double p)
    -> QuantumState {
    if (rho.dim() != 2) {
        throw Error(ErrorCode::NotQubit, "depolarizing acts on a qubit");
    }
    check_unit_interval(p, "depolarizing probability");
    return QuantumState((1.0 - p) * rho.op() +
                        (p / 2.0) * OperatorMatrix::identity(2));
}

/// Depolarizes one qubit of a two-qubit state.
inline auto depolarize_subsystem(const QuantumState &rho_ab, Subsystem which,
                                 double p) -> QuantumState {
    if (rho_ab.dim() != 4) {
        throw Error(ErrorCode::NotTwoQubit, "expected a two-qubit state");
    }
    check_unit_interval(p, "depolarizing probability");
    const OperatorMatrix joint = rho_ab.op().with_split({2, 2});
    const OperatorMatrix half = 0.5 * OperatorMatrix::identity(2);
    const OperatorMatrix replaced =
        which == Subsystem::A
            ? kron(half, partial_trace(joint, Subsystem::A))
            : kron(partial_trace(joint, Subsystem::B), half);
    return QuantumState((1.0 - p) * joint + p * replaced);
}

struct NoiseModel {
    double depolarizing_p = 0.0;
    double readout_flip = 0.0;

    void validate() const {
        check_unit_interval(depolarizing_p, "depolarizing_p");
        check_unit_interval(readout_flip, "readout_flip");
    }
};

/// Readout bits (phase, parity) of the Bell circuit for each outcome.
constexpr auto bell_bits(BellOutcome o) -> std::pair<int, int> {
    switch (o) {
    case BellOutcome::PhiPlus:
        return {0, 0};
    case BellOutcome::PhiMinus:
        return {1, 0};
    case BellOutcome::PsiPlus:
        return {0, 1};
    case BellOutcome::PsiMinus:
        return {1, 1};
    }
    return {0, 0};
}

/// Independent flips of both readout bits with probability q.
inline auto apply_readout_flip(const BellProbs &p, double q) -> BellProbs {
    check_unit_interval(q, "readout_flip");
    BellProbs out{};
    for (auto from : kBellOutcomes) {
        const auto [f0, f1] = bell_bits(from);
        for (auto to : kBellOutcomes) {
            const auto [t0, t1] = bell_bits(to);
            const int flips = (f0 != t0) + (f1 != t1);
            const double w = std::pow(q, flips) * std::pow(1.0 - q, 2 - flips);
            out[static_cast<std::size_t>(to)] +=
                w * p[static_cast<std::size_t>(from)];
        }
    }
    return out;
}

/// Exact outcome distribution of a joint preparation under noise.
inline auto noisy_bell_probs(const QuantumState &rho_ab, const NoiseModel &noise)
    -> BellProbs {
    noise.validate();
    QuantumState rho = depolarize_subsystem(rho_ab, Subsystem::A,
                                            noise.depolarizing_p);
    rho = depolarize_subsystem(rho, Subsystem::B, noise.depolarizing_p);
    return apply_readout_flip(bell_measure_probs(rho), noise.readout_flip);
}

struct ShotCounts {
    std::array<std::int64_t, 4> counts{};
    std::int64_t shots = 0;

    [[nodiscard]] auto frequency(BellOutcome o) const -> double {
        if (shots == 0) {
            throw Error(ErrorCode::EmptyCounts, "no shots recorded");
        }
        return static_cast<double>(counts[static_cast<std::size_t>(o)]) /
               static_cast<double>(shots);
    }

    auto operator+=(const ShotCounts &other) -> ShotCounts & {
        for (std::size_t k = 0; k < 4; ++k) {
            counts[k] += other.counts[k];
        }
        shots += other.shots;
        return *this;
    }
};

/// Multinomial sample by sequential conditional binomials.
inline auto sample_counts(const BellProbs &probs, std::int64_t shots, Rng &rng)
    -> ShotCounts {
    if (shots < 0) {
        throw Error(ErrorCode::InvalidArgument, "shots must be nonnegative");
    }
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw Error(ErrorCode::ProbabilityOutOfRange,
                        "negative outcome probability");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kValidationTol) {
        throw Error(ErrorCode::ProbabilityOutOfRange,
                    "outcome probabilities sum to " + std::to_string(total));
    }
    ShotCounts out;
    out.shots = shots;
    std::int64_t remaining = shots;
    double mass = 1.0;
    for (std::size_t k = 0; k < 3 && remaining > 0; ++k) {
        const double q = mass > 0.0 ? std::clamp(probs[k] / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::int64_t> binom(remaining, q);
        const std::int64_t c = binom(rng);
        out.counts[k] = c;
        remaining -= c;
        mass -= probs[k];
    }
    out.counts[3] = remaining;
    return out;
}

inline auto sample_counts(const BellProbs &probs, std::int64_t shots,
                          std::uint64_t seed) -> ShotCounts {
    Rng rng(seed);
    return sample_counts(probs, shots, rng);
}

struct EEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Arguments in the order (rho^A, rho^B), (rho^A, mix), (mix, rho^B), (mix, mix).
inline auto estimate_e(const ShotCounts &c11, const ShotCounts &c1m,
                       const ShotCounts &cm1, const ShotCounts &cmm,
                       BellOutcome target) -> EEstimate {
    const std::array<const ShotCounts *, 4> records{&c11, &c1m, &cm1, &cmm};
    constexpr std::array<double, 4> signs{1.0, -1.0, -1.0, 1.0};
    EEstimate out;
    double variance = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const ShotCounts &c = *records[k];
        if (c.shots == 0) {
            throw Error(ErrorCode::EmptyCounts,
                        "preparation setting has zero shots");
        }
        const double p = c.frequency(target);
        out.value += 4.0 * signs[k] * p;
        variance += 16.0 * p * (1.0 - p) / static_cast<double>(c.shots);
    }
    out.std_error = std::sqrt(variance);
    return out;
}

enum class PreparationLabel { Both, AMixed, BMixed, BothMixed };

constexpr auto to_string(PreparationLabel l) -> std::string_view {
    switch (l) {
    case PreparationLabel::Both:
        return "(i,j)";
    case PreparationLabel::AMixed:
        return "(mix,j)";
    case PreparationLabel::BMixed:
        return "(i,mix)";
    case PreparationLabel::BothMixed:
        return "(mix,mix)";
    }
    return "?";
}

struct PreparationSetting {
    QuantumState rho_a;
    QuantumState rho_b;
    PreparationLabel label;
    std::size_t term_i;
    std::size_t term_j;
};

/// Estimator order of the four preparations inside one E term.
inline constexpr std::array<PreparationLabel, 4> kTermPreparations{
    PreparationLabel::Both, PreparationLabel::BMixed, PreparationLabel::AMixed,
    PreparationLabel::BothMixed};

/// The 16 preparations; index = 4 * (2 i + j) + position in the term.
inline auto preparation_settings(const ChshSetting &s)
    -> std::vector<PreparationSetting> {
    const QuantumState mix = maximally_mixed(2);
    std::vector<PreparationSetting> out;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (auto label : kTermPreparations) {
                const bool a_mixed = label == PreparationLabel::AMixed ||
                                     label == PreparationLabel::BothMixed;
                const bool b_mixed = label == PreparationLabel::BMixed ||
                                     label == PreparationLabel::BothMixed;
                out.push_back({a_mixed ? mix : s.rho_a()[i],
                               b_mixed ? mix : s.rho_b()[j], label, i, j});
            }
        }
    }
    return out;
}

/// Which Bell projector M_+1 is, if any.
inline auto bell_target(const BinaryObservable &m) -> BellOutcome {
    if (m.dim() != 4) {
        throw Error(ErrorCode::NotTwoQubit, "simulator needs two qubits");
    }
    for (auto o : kBellOutcomes) {
        if (max_abs_diff(m.plus().matrix(), bell_projector(o).matrix()) <=
            kValidationTol) {
            return o;
        }
    }
    throw Error(ErrorCode::UnsupportedMeasurement,
                "M_+1 is not one of the four Bell projectors");
}

struct DEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::array<EEstimate, 4> per_term{}; ///< E00, E01, E10, E11
    std::int64_t shots_per_setting = 0;
    std::uint64_t seed = 0;
};

struct SettingRecord {
    std::size_t index;
    std::size_t term_i;
    std::size_t term_j;
    PreparationLabel label;
    std::uint64_t seed;
    BellProbs exact_probs;
    ShotCounts counts;
};

struct ExperimentOptions {
    std::int64_t shots_per_setting = 100000;
    NoiseModel noise{};
    std::uint64_t seed = 0;
    /// Realize 1/2 as an equal mixture of |0> and |1> preparations, shot by shot.
    bool pure_mixture_preparations = false;
};

struct ExperimentResult {
    DEstimate estimate;
    BellOutcome target;
    NoiseModel noise;
    bool pure_mixture_preparations;
    std::vector<SettingRecord> settings;
};

namespace detail {

inline auto combine_terms(const std::array<EEstimate, 4> &terms)
    -> std::pair<double, double> {
    double value = 0.0;
    double variance = 0.0;
    for (std::size_t t = 0; t < 4; ++t) {
        value += chsh_sign(t / 2, t % 2) * terms[t].value;
        variance += terms[t].std_error * terms[t].std_error;
    }
    return {value, std::sqrt(variance)};
}

inline auto simulate_setting(const PreparationSetting &prep,
                             const ExperimentOptions &options, Rng &rng)
    -> std::pair<BellProbs, ShotCounts> {
    const BellProbs exact =
        noisy_bell_probs(product_state(prep.rho_a, prep.rho_b), options.noise);
    const bool a_mixed = prep.label == PreparationLabel::AMixed ||
                         prep.label == PreparationLabel::BothMixed;
    const bool b_mixed = prep.label == PreparationLabel::BMixed ||
                         prep.label == PreparationLabel::BothMixed;
    if (!options.pure_mixture_preparations || (!a_mixed && !b_mixed)) {
        return {exact, sample_counts(exact, options.shots_per_setting, rng)};
    }
    // Split the shots over the pure components, then sample each.
    const std::array<QuantumState, 2> basis{pure_state(basis_ket(2, 0)),
                                            pure_state(basis_ket(2, 1))};
    std::vector<std::pair<QuantumState, QuantumState>> parts;
    for (std::size_t ka = 0; ka < (a_mixed ? 2U : 1U); ++ka) {
        for (std::size_t kb = 0; kb < (b_mixed ? 2U : 1U); ++kb) {
            parts.emplace_back(a_mixed ? basis[ka] : prep.rho_a,
                               b_mixed ? basis[kb] : prep.rho_b);
        }
    }
    std::int64_t remaining = options.shots_per_setting;
    ShotCounts total;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        std::int64_t n = remaining;
        if (k + 1 < parts.size()) {
            std::binomial_distribution<std::int64_t> binom(
                remaining, 1.0 / static_cast<double>(parts.size() - k));
            n = binom(rng);
        }
        remaining -= n;
        const BellProbs p = noisy_bell_probs(
            product_state(parts[k].first, parts[k].second), options.noise);
        total += sample_counts(p, n, rng);
    }
    return {exact, total};
}

} // namespace detail

/**
 * @brief Runs the 16 preparation settings and aggregates D.
 *
 * Setting k draws from its own stream seeded with seed + k, so the result
 * does not depend on evaluation order.
 */
inline auto run_dual_chsh_experiment(const ChshSetting &setting,
                                     const ExperimentOptions &options)
    -> ExperimentResult {
    if (setting.dims() != DimSplit{2, 2}) {
        throw Error(ErrorCode::NotTwoQubit, "simulator needs two qubits");
    }
    options.noise.validate();
    if (options.shots_per_setting <= 0) {
        throw Error(ErrorCode::EmptyCounts, "shots per setting must be positive");
    }
    const BellOutcome target = bell_target(setting.observable());
    const auto preps = preparation_settings(setting);

    ExperimentResult result{{}, target, options.noise,
                            options.pure_mixture_preparations, {}};
    for (std::size_t k = 0; k < preps.size(); ++k) {
        const std::uint64_t seed = options.seed + k;
        Rng rng(seed);
        auto [exact, counts] = detail::simulate_setting(preps[k], options, rng);
        result.settings.push_back({k, preps[k].term_i, preps[k].term_j,
                                   preps[k].label, seed, exact, counts});
    }
    for (std::size_t t = 0; t < 4; ++t) {
        const auto &s = result.settings;
        result.estimate.per_term[t] =
            estimate_e(s[4 * t].counts, s[4 * t + 1].counts,
                       s[4 * t + 2].counts, s[4 * t + 3].counts, target);
    }
    const auto [value, err] = detail::combine_terms(result.estimate.per_term);
    result.estimate.value = value;
    result.estimate.std_error = err;
    result.estimate.shots_per_setting = options.shots_per_setting;
    result.estimate.seed = options.seed;
    return result;
}

/// D from exact noisy outcome probabilities through the same estimator.
inline auto exact_noisy_d(const ChshSetting &setting, const NoiseModel &noise)
    -> double {
    const BellOutcome target = bell_target(setting.observable());
    const auto preps = preparation_settings(setting);
    constexpr std::array<double, 4> signs{1.0, -1.0, -1.0, 1.0};
    std::array<EEstimate, 4> terms{};
    for (std::size_t k = 0; k < preps.size(); ++k) {
        const BellProbs p = noisy_bell_probs(
            product_state(preps[k].rho_a, preps[k].rho_b), noise);
        terms[k / 4].value +=
            4.0 * signs[k % 4] * p[static_cast<std::size_t>(target)];
    }
    return detail::combine_terms(terms).first;
}

/**
 * @brief Bisection for the depolarizing strength whose exact noisy D equals
 * target_d, at fixed readout flip.
 */
inline auto calibrate_depolarizing(const ChshSetting &setting, double target_d,
                                   double readout_flip = 0.0,
                                   double tol = 1e-13) -> double {
    auto d_at = [&](double p) {
        return exact_noisy_d(setting, NoiseModel{p, readout_flip});
    };
    double lo = 0.0;
    double hi = 1.0;
    const double d_lo = d_at(lo);
    const double d_hi = d_at(hi);
    if (target_d > d_lo || target_d < d_hi) {
        throw Error(ErrorCode::InvalidArgument,
                    "target D " + std::to_string(target_d) +
                        " outside the reachable range [" +
                        std::to_string(d_hi) + ", " + std::to_string(d_lo) +
                        "]");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (d_at(mid) > target_d) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// rho_0^A = |0><0|, rho_1^A = |+><+|, rho_{0,1}^B with Bloch vectors
/// (-+1/sqrt2, 0, 1/sqrt2), and M_+1 = |Phi-><Phi-|.
inline auto paper_setting() -> ChshSetting {
    constexpr double r2 = std::numbers::sqrt2;
    CMatrix b0(2, 2);
    b0 << (2.0 + r2) / 4.0, -r2 / 4.0, -r2 / 4.0, (2.0 - r2) / 4.0;
    CMatrix b1(2, 2);
    b1 << (2.0 + r2) / 4.0, r2 / 4.0, r2 / 4.0, (2.0 - r2) / 4.0;
    CVector plus(2);
    plus << r2 / 2.0, r2 / 2.0;
    return {{pure_state(basis_ket(2, 0)), pure_state(plus)},
            {QuantumState(OperatorMatrix(b0)), QuantumState(OperatorMatrix(b1))},
            BinaryObservable::from_plus(bell_projector(BellOutcome::PhiMinus))};
}

/// Hardware Bell histogram of 1_4/4 (Phi+, Phi-, Psi+, Psi-), reference only.
inline constexpr BellProbs kHardwareMixedHistogram{0.2792, 0.2474, 0.2552,
                                                   0.2182};
inline constexpr double kHardwareD = 2.573;
inline constexpr double kHardwareDError = 0.035;

} // namespace dualchsh
