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

#include <numbers>

#include <catch2/catch_amalgamated.hpp>

#include "dualchsh/dual_chsh.hpp"
#include "dualchsh/experiment.hpp"
#include "dualchsh/fixtures.hpp"
#include "oracles.hpp"

using namespace dualchsh;
using Catch::Approx;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

auto qubit(double x, double y, double z) -> QuantumState {
    return bloch_to_state({x, y, z});
}

auto observable(const Effect &e) -> BinaryObservable { return BinaryObservable::from_plus(e); }

auto phi_minus() -> BinaryObservable {
    return observable(bell_projector(BellOutcome::PhiMinus));
}

auto random_qubit_setting(const BinaryObservable &m, Rng &rng) -> ChshSetting {
    auto s = [&] { return bloch_to_state(random_bloch_ball(rng)); };
    return {{s(), s()}, {s(), s()}, m};
}

} // namespace

TEST_CASE("alpha", "[dual_chsh]") {
    CHECK(alpha(2) == 2.0);
    CHECK(alpha(3) == 1.5);
    CHECK(alpha(4) == Approx(4.0 / 3.0));
    try {
        (void)alpha(1);
        FAIL("expected DimTooSmall");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::DimTooSmall);
    }
}

TEST_CASE("difference from ignorance", "[dual_chsh]") {
    const BinaryObservable zero_proj = observable(Effect(OperatorMatrix::projector(basis_ket(2, 0))));
    CHECK(difference_from_ignorance(maximally_mixed(2), zero_proj) == Approx(0.0).margin(1e-15));
    CHECK(difference_from_ignorance(qubit(0, 0, 1), zero_proj) == Approx(1.0));
    CHECK(difference_from_ignorance(qubit(0, 0, -1), zero_proj) == Approx(-1.0));

    Rng rng(4);
    for (std::size_t d : {2U, 3U, 5U}) {
        const BinaryObservable m = observable(random_effect(DimSplit{d, 1}, rng));
        const QuantumState rho = random_mixed_state(d, rng);
        // M/2 form and M_+1 form agree.
        CHECK(std::abs(difference_from_ignorance(rho, m) -
                       ignorance_functional(rho, m.plus().op())) <= 1e-12);
        CHECK(difference_from_ignorance(maximally_mixed(d), m) == Approx(0.0).margin(1e-14));
    }
    try {
        (void)difference_from_ignorance(maximally_mixed(3), zero_proj);
        FAIL("expected DimMismatch");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::DimMismatch);
    }
}

TEST_CASE("bipartite difference examples", "[dual_chsh]") {
    const BinaryObservable m = phi_minus();
    CHECK(bipartite_difference(maximally_mixed(2), qubit(0, 0, 1), m) == Approx(0.0).margin(1e-15));
    CHECK(bipartite_difference(qubit(1, 0, 0), maximally_mixed(2), m) == Approx(0.0).margin(1e-15));
    CHECK(bipartite_difference(qubit(0, 0, 1), qubit(-1 / kSqrt2, 0, 1 / kSqrt2), m) ==
          Approx(1 / kSqrt2).epsilon(1e-14));
    CHECK(bipartite_difference(qubit(1, 0, 0), qubit(1, 0, 0), m) == Approx(-1.0));
}

TEST_CASE("bipartite difference equals the Bloch contraction a.T b", "[dual_chsh][property]") {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const Effect e = random_effect(DimSplit{2, 2}, rng);
        const BlochVector a = random_bloch_ball(rng);
        const BlochVector b = random_bloch_ball(rng);
        const Eigen::Matrix3d t = oracle::t_matrix(e.matrix());
        const double contraction = a.as_eigen().dot(t * b.as_eigen());
        CHECK(std::abs(bipartite_difference(bloch_to_state(a), bloch_to_state(b), observable(e)) -
                       contraction) <= 1e-10);
    }
}

TEST_CASE("bipartite difference matches the loop oracle in mixed dimensions", "[dual_chsh][property]") {
    Rng rng(32);
    for (DimSplit s : {DimSplit{2, 3}, DimSplit{3, 3}, DimSplit{3, 2}}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Effect e = random_effect(s, rng);
            const QuantumState ra = random_mixed_state(s.a, rng);
            const QuantumState rb = random_mixed_state(s.b, rng);
            CHECK(std::abs(bipartite_difference(ra, rb, observable(e)) -
                           oracle::bipartite_e(ra.matrix(), rb.matrix(), e.matrix())) <= 1e-12);
        }
    }
}

TEST_CASE("d_value examples", "[dual_chsh]") {
    CHECK(d_value(fixtures::all_mixed_setting()) == Approx(0.0).margin(1e-15));

    const ChshSetting reference = paper_setting();
    CHECK(std::abs(d_value(reference) - 2 * kSqrt2) <= 1e-12);

    const ChshSetting product(reference.rho_a(), reference.rho_b(),
                              observable(fixtures::product_projector(0, 0)));
    CHECK(d_value(product) == Approx(kSqrt2).epsilon(1e-13));

    const auto e = d_terms(reference);
    CHECK(e[0][0] == Approx(1 / kSqrt2));
    CHECK(e[0][1] == Approx(1 / kSqrt2));
    CHECK(e[1][0] == Approx(1 / kSqrt2));
    CHECK(e[1][1] == Approx(-1 / kSqrt2));
}

TEST_CASE("setting dimension checks", "[dual_chsh]") {
    const QuantumState q = maximally_mixed(2);
    const QuantumState t = maximally_mixed(3);
    CHECK_THROWS_AS(ChshSetting({q, q}, {t, t}, phi_minus()), Error);
    CHECK_THROWS_AS(ChshSetting({q, t}, {q, q}, phi_minus()), Error);
}

TEST_CASE("trace condition", "[dual_chsh]") {
    CHECK(check_trace_condition(phi_minus()));
    CHECK_FALSE(check_trace_condition(
        observable(Effect(0.5 * OperatorMatrix::identity(4, DimSplit{2, 2})))));
    CHECK(check_trace_condition(observable(Effect(OperatorMatrix::zero(4, DimSplit{2, 2})))));
    // Complement side: tr(M_-1) = 1.
    CHECK(check_trace_condition(observable(bell_projector(BellOutcome::PsiPlus).complement())));
}

TEST_CASE("t_matrix examples", "[dual_chsh]") {
    const RealMatrix3 tm = t_matrix(bell_projector(BellOutcome::PhiMinus)).t;
    RealMatrix3 expected = RealMatrix3::Zero();
    expected.diagonal() << -1, 1, 1;
    CHECK((tm - expected).cwiseAbs().maxCoeff() <= 1e-15);

    RealMatrix3 zz = RealMatrix3::Zero();
    zz(2, 2) = 1;
    CHECK((t_matrix(fixtures::product_projector(0, 0)).t - zz).cwiseAbs().maxCoeff() <= 1e-15);

    const double eps = 0.1;
    RealMatrix3 scaled = RealMatrix3::Zero();
    scaled.diagonal() << 1, -1, 1;
    CHECK((t_matrix(fixtures::epsilon_effect(eps)).t - 2 * eps * scaled).cwiseAbs().maxCoeff() <=
          1e-15);

    try {
        (void)t_matrix(Effect(0.5 * OperatorMatrix::identity(6, DimSplit{2, 3})));
        FAIL("expected NotTwoQubit");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NotTwoQubit);
    }
}

TEST_CASE("max_d_qubit examples", "[dual_chsh]") {
    const MaxDReport bell = max_d_qubit(bell_projector(BellOutcome::PhiMinus));
    CHECK(std::abs(bell.max_d - 2 * kSqrt2) <= 1e-12);
    CHECK(std::abs(d_value(bell.optimal_setting) - bell.max_d) <= 1e-9);
    CHECK(bell.method == MaxDMethod::ClosedForm);

    const MaxDReport prod = max_d_qubit(fixtures::product_projector(0, 0));
    CHECK(prod.max_d == Approx(2.0));
    CHECK(std::abs(d_value(prod.optimal_setting) - 2.0) <= 1e-9);

    const MaxDReport eps = max_d_qubit(fixtures::epsilon_effect(0.1));
    CHECK(eps.max_d == Approx(4 * kSqrt2 * 0.1).epsilon(1e-13));

    try {
        (void)max_d_qubit(Effect(0.5 * OperatorMatrix::identity(4, DimSplit{2, 2})));
        FAIL("expected TraceConditionViolated");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::TraceConditionViolated);
    }
}

TEST_CASE("max_d_qubit setting reproduces its value on random effects", "[dual_chsh][property]") {
    Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const auto m = renormalize_effect(observable(random_effect(DimSplit{2, 2}, rng)));
        const MaxDReport r = max_d_qubit(m.plus());
        CHECK(std::abs(d_value(r.optimal_setting) - r.max_d) <= 1e-9);
        // No random qubit setting beats the closed form.
        for (int k = 0; k < 10; ++k) {
            CHECK(d_value(random_qubit_setting(m, rng)) <= r.max_d + 1e-9);
        }
    }
}

TEST_CASE("max_d_qubit handles degenerate T", "[dual_chsh]") {
    const MaxDReport zero = max_d_qubit(Effect(0.25 * OperatorMatrix::identity(4, DimSplit{2, 2})));
    CHECK(zero.max_d == Approx(0.0).margin(1e-15));
    CHECK(std::abs(d_value(zero.optimal_setting)) <= 1e-12);
    // s1 = s2 = s3 for a scaled Bell projector.
    const MaxDReport equal = max_d_qubit(fixtures::epsilon_effect(0.3));
    CHECK(std::abs(d_value(equal.optimal_setting) - equal.max_d) <= 1e-9);
}

TEST_CASE("seesaw examples", "[dual_chsh]") {
    const SeesawOptions opts{16, 200, 1e-10, 1};
    const MaxDReport bell = maximize_d_seesaw(phi_minus(), DimSplit{2, 2}, opts);
    CHECK(std::abs(bell.max_d - 2 * kSqrt2) <= 1e-6);
    CHECK(bell.converged);
    CHECK(std::abs(d_value(bell.optimal_setting) - bell.max_d) <= 1e-9);

    const MaxDReport prod =
        maximize_d_seesaw(observable(fixtures::product_projector(0, 0)), DimSplit{2, 2}, opts);
    CHECK(std::abs(prod.max_d - 2.0) <= 1e-6);

    try {
        (void)maximize_d_seesaw(observable(Effect(0.5 * OperatorMatrix::identity(4))),
                                DimSplit{2, 2}, opts);
        FAIL("expected TraceConditionViolated");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::TraceConditionViolated);
    }
}

TEST_CASE("seesaw agrees with the closed form on random two-qubit effects", "[dual_chsh][property]") {
    Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const auto m = renormalize_effect(observable(random_effect(DimSplit{2, 2}, rng)));
        const MaxDReport closed = max_d_qubit(m.plus());
        const MaxDReport seesaw =
            maximize_d_seesaw(m, DimSplit{2, 2}, {16, 200, 1e-10, static_cast<std::uint64_t>(trial)});
        CHECK(std::abs(closed.max_d - seesaw.max_d) <= 1e-6);
    }
}

TEST_CASE("seesaw is nondecreasing in the number of sweeps", "[dual_chsh][property]") {
    Rng rng(8);
    const Effect e = random_effect(DimSplit{3, 3}, rng);
    const auto m = renormalize_effect(observable(e));
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t iters = 1; iters <= 12; ++iters) {
        const double v = maximize_d_seesaw(m, DimSplit{3, 3}, {1, iters, 0.0, 5}).max_d;
        CHECK(v >= previous - 1e-12);
        previous = v;
    }
}

TEST_CASE("seesaw is reproducible for a fixed seed", "[dual_chsh]") {
    const Effect e = fixtures::random_effect_3x3();
    const auto m = renormalize_effect(observable(e));
    const MaxDReport a = maximize_d_seesaw(m, DimSplit{3, 3}, {4, 100, 1e-10, 99});
    const MaxDReport b = maximize_d_seesaw(m, DimSplit{3, 3}, {4, 100, 1e-10, 99});
    CHECK(a.max_d == b.max_d);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("dual Tsirelson bound", "[dual_chsh]") {
    const ChshSetting reference = paper_setting();
    CHECK(std::abs(dual_tsirelson(reference.rho_a(), reference.rho_b()) - 2 * kSqrt2) <= 1e-9);
    // ||S^2|| = 8, frozen from a numpy evaluation of the same operator.
    const OperatorMatrix s = chsh_operator(reference.rho_a(), reference.rho_b());
    CHECK(operator_norm(s * s) == Approx(8.0).epsilon(1e-13));

    const QuantumState mix = maximally_mixed(2);
    CHECK(dual_tsirelson({mix, mix}, {mix, mix}) == Approx(0.0).margin(1e-15));

    // Identical pairs: S = 2 X (x) Y, norm 2 ||X|| ||Y||.
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const QuantumState a = bloch_to_state(random_bloch_ball(rng));
        const QuantumState b = bloch_to_state(random_bloch_ball(rng));
        const double direct = 2.0 * operator_norm(2.0 * centered(a)) * operator_norm(2.0 * centered(b));
        CHECK(dual_tsirelson({a, a}, {b, b}) == Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("dual Tsirelson bounds D under the trace condition", "[dual_chsh][property]") {
    Rng rng(55);
    for (int trial = 0; trial < 300; ++trial) {
        const auto m = renormalize_effect(observable(random_effect(DimSplit{2, 2}, rng)));
        const ChshSetting s = random_qubit_setting(m, rng);
        const double bound = dual_tsirelson(s.rho_a(), s.rho_b());
        CHECK(std::abs(d_value(s)) <= bound + 1e-9);
        CHECK(bound <= 2 * kSqrt2 + 1e-9);
    }
    for (int trial = 0; trial < 50; ++trial) {
        const DimSplit split{3, 2};
        const auto m = renormalize_effect(observable(random_effect(split, rng)));
        const ChshSetting s({random_mixed_state(3, rng), random_pure_state(3, rng)},
                            {random_pure_state(2, rng), random_mixed_state(2, rng)}, m);
        CHECK(std::abs(d_value(s)) <= dual_tsirelson(s.rho_a(), s.rho_b()) + 1e-9);
    }
}
