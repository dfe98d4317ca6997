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

#include "dualchsh/quantum_objects.hpp"
#include "dualchsh/random.hpp"
#include "oracles.hpp"

using namespace dualchsh;
using Catch::Approx;

namespace {

template <class F> auto code_of(F &&f) -> ErrorCode {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("no exception thrown");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("validation rejects invalid objects", "[quantum_objects]") {
    CMatrix nh = CMatrix::Zero(2, 2);
    nh(0, 1) = 1.0;
    nh(0, 0) = 1.0;
    CHECK(code_of([&] { QuantumState s{OperatorMatrix(nh)}; }) == ErrorCode::NotHermitian);
    CHECK(code_of([&] { QuantumState s{0.5 * (pauli(0) + 1.2 * pauli(3))}; }) ==
          ErrorCode::InvalidState);
    CHECK(code_of([&] { QuantumState s{pauli(0)}; }) == ErrorCode::InvalidState);
    CHECK(code_of([&] { Effect e{1.1 * pauli(0)}; }) == ErrorCode::InvalidEffect);
    CHECK(code_of([&] { Effect e{pauli(3)}; }) == ErrorCode::InvalidEffect);
    REQUIRE_NOTHROW(Effect{(1.0 + 1e-10) * pauli(0)});
    CHECK(code_of([&] {
              BinaryObservable m(Effect(0.5 * pauli(0)), Effect(0.25 * pauli(0)));
          }) == ErrorCode::InvalidObservable);
    CHECK(code_of([&] {
              Povm p({Effect(0.5 * OperatorMatrix::identity(4)),
                      Effect(0.25 * OperatorMatrix::identity(4))});
          }) == ErrorCode::InvalidPovm);
}

TEST_CASE("binary observable expectation operator", "[quantum_objects]") {
    const BinaryObservable m =
        BinaryObservable::from_plus(bell_projector(BellOutcome::PhiMinus));
    const OperatorMatrix expected =
        2.0 * bell_projector(BellOutcome::PhiMinus).op() - OperatorMatrix::identity(4);
    CHECK(max_abs_diff(m.expectation(), expected) <= 1e-15);
    const BinaryObservable back = BinaryObservable::from_expectation(expected);
    CHECK(max_abs_diff(back.plus().op(), m.plus().op()) <= 1e-15);
    CHECK(code_of([] { (void)BinaryObservable::from_expectation(2.0 * pauli(3)); }) ==
          ErrorCode::InvalidObservable);
}

TEST_CASE("born_probability", "[quantum_objects]") {
    const QuantumState mixed = maximally_mixed(4);
    CHECK(born_probability(mixed, bell_projector(BellOutcome::PhiMinus)) == Approx(0.25));
    CHECK(born_probability(bell_state(BellOutcome::PhiPlus),
                           bell_projector(BellOutcome::PhiPlus)) == Approx(1.0));
    CHECK(code_of([&] { (void)born_probability(maximally_mixed(2), bell_projector(BellOutcome::PhiPlus)); }) ==
          ErrorCode::DimMismatch);
}

TEST_CASE("born probabilities of complementary outcomes sum to one", "[quantum_objects]") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const DimSplit split{2 + static_cast<std::size_t>(trial % 2), 2};
        const Effect e = random_effect(split, rng);
        const BinaryObservable m = BinaryObservable::from_plus(e);
        const QuantumState rho = random_mixed_state(split.a * split.b, rng);
        CHECK(std::abs(born_probability(rho, m.plus()) + born_probability(rho, m.minus()) -
                       1.0) <= 1e-9);
    }
}

TEST_CASE("Bloch map examples", "[quantum_objects]") {
    CHECK(max_abs_diff(bloch_to_state({0, 0, 1}).op(),
                       OperatorMatrix::projector(basis_ket(2, 0))) <= 1e-15);
    CHECK(max_abs_diff(bloch_to_state({0, 0, 0}).op(),
                       0.5 * OperatorMatrix::identity(2)) <= 1e-15);
    constexpr double r2 = std::numbers::sqrt2;
    CMatrix b0_matrix(2, 2);
    b0_matrix << (2 + r2) / 4, -r2 / 4, -r2 / 4, (2 - r2) / 4;
    CHECK(max_abs_diff(bloch_to_state({-1 / r2, 0, 1 / r2}).matrix(), b0_matrix) <= 1e-15);

    CHECK(code_of([] { (void)bloch_to_state({1, 1, 0}); }) == ErrorCode::BlochNormExceeded);
    CHECK(code_of([] { (void)state_to_bloch(maximally_mixed(3)); }) == ErrorCode::NotQubit);
}

TEST_CASE("Bloch round trip on random unit-ball vectors", "[quantum_objects]") {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const BlochVector r = random_bloch_ball(rng);
        const BlochVector back = state_to_bloch(bloch_to_state(r));
        CHECK(std::abs(back.x - r.x) <= 1e-12);
        CHECK(std::abs(back.y - r.y) <= 1e-12);
        CHECK(std::abs(back.z - r.z) <= 1e-12);
    }
}

TEST_CASE("Bell basis", "[quantum_objects]") {
    const auto bell = bell_states();
    CHECK(std::abs(bell_vector(BellOutcome::PhiPlus).dot(bell_vector(BellOutcome::PhiMinus))) <= 1e-16);
    CMatrix sum = CMatrix::Zero(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        sum += bell[i].matrix();
        CHECK(max_abs_diff(partial_trace(bell[i].op(), Subsystem::A).matrix(),
                           0.5 * CMatrix::Identity(2, 2)) <= 1e-15);
        CHECK(std::abs(hermitian_eig(bell[i].op()).values(0) - 1.0) <= 1e-12);
        for (std::size_t j = 0; j < 4; ++j) {
            const double overlap = trace_product(bell[i].matrix(), bell[j].matrix()).real();
            CHECK(std::abs(overlap - (i == j ? 1.0 : 0.0)) <= 1e-15);
        }
    }
    CHECK(max_abs_diff(sum, CMatrix::Identity(4, 4)) <= 1e-15);
    // Fixed phase convention, checked against the oracle vectors.
    for (int k = 0; k < 4; ++k) {
        CHECK((bell_vector(kBellOutcomes[k]) - oracle::bell_vector(k)).norm() <= 1e-15);
    }
}

TEST_CASE("maximally mixed state", "[quantum_objects]") {
    CHECK(max_abs_diff(maximally_mixed(2).op(), 0.5 * OperatorMatrix::identity(2)) == 0.0);
    CHECK(max_abs_diff(maximally_mixed(4).op(), 0.25 * OperatorMatrix::identity(4)) == 0.0);
    CHECK(maximally_mixed(7).op().trace().real() == Approx(1.0));
}

TEST_CASE("renormalize_effect", "[quantum_objects]") {
    const BinaryObservable bell =
        BinaryObservable::from_plus(bell_projector(BellOutcome::PhiMinus));
    CHECK(max_abs_diff(renormalize_effect(bell).plus().op(), bell.plus().op()) == 0.0);

    const BinaryObservable half =
        BinaryObservable::from_plus(Effect(0.5 * OperatorMatrix::identity(4, DimSplit{2, 2})));
    const BinaryObservable r = renormalize_effect(half);
    CHECK(max_abs_diff(r.plus().op(), 0.25 * OperatorMatrix::identity(4)) <= 1e-15);
    CHECK(r.plus().op().split() == DimSplit{2, 2});

    const Effect eps(0.6 * bell_projector(BellOutcome::PhiPlus).op());
    const BinaryObservable e = BinaryObservable::from_plus(eps);
    CHECK(max_abs_diff(renormalize_effect(e).plus().op(), eps.op()) == 0.0);
}

TEST_CASE("renormalize_effect output always satisfies the trace condition", "[quantum_objects]") {
    Rng rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const DimSplit split{2 + static_cast<std::size_t>(trial % 3), 2};
        const auto m = renormalize_effect(BinaryObservable::from_plus(random_effect(split, rng)));
        CHECK((m.plus().trace() <= 1.0 + 1e-9 || m.minus().trace() <= 1.0 + 1e-9));
    }
}

TEST_CASE("random POVMs are complete", "[quantum_objects]") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const Povm p = random_povm(DimSplit{2, 2}, 4, rng);
        CMatrix sum = CMatrix::Zero(4, 4);
        for (const auto &e : p.effects()) {
            sum += e.matrix();
        }
        CHECK(max_abs_diff(sum, CMatrix::Identity(4, 4)) <= 1e-12);
    }
}
