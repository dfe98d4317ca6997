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
 * Named example objects, also shipped as JSON files under fixtures/.
 */

#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "experiment.hpp"
#include "io.hpp"
#include "random.hpp"

namespace dualchsh::fixtures {

/// eps (|00> + |11>)(<00| + <11|) = 2 eps |Phi+><Phi+|, an effect for eps <= 1/2.
inline auto epsilon_effect(double eps) -> Effect {
    return Effect((2.0 * eps) *
                  OperatorMatrix::projector(bell_vector(BellOutcome::PhiPlus),
                                            DimSplit{2, 2}));
}

inline auto product_projector(std::size_t i, std::size_t j) -> Effect {
    return Effect(OperatorMatrix::projector(
        kron(basis_ket(2, i), basis_ket(2, j)), DimSplit{2, 2}));
}

/// Computational-basis measurement {|ij><ij|}.
inline auto product_povm() -> Povm {
    return Povm({product_projector(0, 0), product_projector(0, 1),
                 product_projector(1, 0), product_projector(1, 1)});
}

/// Four copies of 1_4 / 4.
inline auto noisy_povm() -> Povm {
    const Effect quarter(0.25 * OperatorMatrix::identity(4, DimSplit{2, 2}));
    return Povm({quarter, quarter, quarter, quarter});
}

/// A_i = (B_i + |ij><ij|) / 2 with B_i the Bell projectors in order.
inline auto half_bell_half_product_povm() -> Povm {
    std::vector<Effect> effects;
    for (std::size_t k = 0; k < 4; ++k) {
        const OperatorMatrix bell = bell_projector(kBellOutcomes[k]).op();
        const OperatorMatrix prod = product_projector(k / 2, k % 2).op();
        effects.emplace_back(0.5 * (bell + prod));
    }
    return Povm(std::move(effects));
}

inline auto all_mixed_setting() -> ChshSetting {
    const QuantumState mix = maximally_mixed(2);
    return {{mix, mix},
            {mix, mix},
            BinaryObservable::from_plus(bell_projector(BellOutcome::PhiMinus))};
}

inline auto random_effect_3x3(std::uint64_t seed = 33) -> Effect {
    Rng rng(seed);
    return random_effect(DimSplit{3, 3}, rng);
}

/// (file name, document) for every bundled fixture.
inline auto bundled() -> std::vector<std::pair<std::string, io::json>> {
    using io::to_json;
    std::vector<std::pair<std::string, io::json>> out;
    out.emplace_back("paper_setting.json",
                     to_json(paper_setting(), {{"name", "paper_setting"}}));
    out.emplace_back("all_mixed_setting.json",
                     to_json(all_mixed_setting(), {{"name", "all_mixed"}}));
    const std::array<const char *, 4> bell_names{"phi_plus", "phi_minus",
                                                 "psi_plus", "psi_minus"};
    for (std::size_t k = 0; k < 4; ++k) {
        out.emplace_back(std::string("bell_") + bell_names[k] + ".json",
                         to_json(bell_projector(kBellOutcomes[k]),
                                 {{"name", std::string("bell_") + bell_names[k]}}));
    }
    out.emplace_back("product_00.json",
                     to_json(product_projector(0, 0), {{"name", "product_00"}}));
    for (const char *eps : {"0.05", "0.1", "0.2", "0.3", "0.5"}) {
        out.emplace_back(std::string("epsilon_effect_") + eps + ".json",
                         to_json(epsilon_effect(std::stod(eps)),
                                 {{"name", "epsilon_effect"}, {"epsilon", eps}}));
    }
    out.emplace_back("random_effect_3x3.json",
                     to_json(random_effect_3x3(),
                             {{"name", "random_effect_3x3"}, {"seed", "33"}}));
    out.emplace_back("maximally_mixed_2x2.json",
                     to_json(QuantumState(0.25 * OperatorMatrix::identity(
                                                     4, DimSplit{2, 2})),
                             {{"name", "maximally_mixed"}}));
    out.emplace_back("bell_povm.json", to_json(bell_povm(), {{"name", "bell"}}));
    out.emplace_back("product_povm.json",
                     to_json(product_povm(), {{"name", "product"}}));
    out.emplace_back("noisy_povm.json",
                     to_json(noisy_povm(), {{"name", "maximally_noisy"}}));
    out.emplace_back("half_bell_half_product_povm.json",
                     to_json(half_bell_half_product_povm(),
                             {{"name", "half_bell_half_product"}}));
    return out;
}

} // namespace dualchsh::fixtures
