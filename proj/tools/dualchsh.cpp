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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace dualchsh;
using namespace dualchsh::cli;

void add_seesaw_flags(CLI::App *app, SeesawOptions &o) {
    app->add_option("--restarts", o.restarts, "seesaw restarts")->capture_default_str();
    app->add_option("--max-iters", o.max_iters, "sweeps per restart")->capture_default_str();
    app->add_option("--tol", o.tol, "stop when |delta D| < tol")->capture_default_str();
    app->add_option("--seed", o.seed, "seed for restart initializations");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Dual Bell-CHSH entanglement detection for quantum effects"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    std::string report_path;
    app.add_option("--report", report_path, "write the machine-readable JSON report here");

    std::uint64_t env_seed = 0;
    try {
        env_seed = default_seed();
    } catch (const Error &e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }

    DvalueOptions dv;
    auto *dvalue = app.add_subcommand("dvalue", "evaluate D for a setting");
    dvalue->add_option("--setting", dv.setting, "setting document");
    dvalue->add_option("--a0", dv.rho_a[0], "state rho_0^A");
    dvalue->add_option("--a1", dv.rho_a[1], "state rho_1^A");
    dvalue->add_option("--b0", dv.rho_b[0], "state rho_0^B");
    dvalue->add_option("--b1", dv.rho_b[1], "state rho_1^B");
    dvalue->add_option("--effect", dv.observable, "effect (M_+1) or observable document");
    dvalue->add_flag("--renormalize", dv.renormalize, "coarse-grain M_+1 to meet the trace condition");

    ClassifyOptions cl;
    cl.seesaw.seed = env_seed;
    auto *classify = app.add_subcommand("classify", "classify an effect as separable or entangled");
    classify->add_option("effect", cl.effect, "effect document")->required();
    add_seesaw_flags(classify, cl.seesaw);

    MaximizeOptions mx;
    mx.seesaw.seed = env_seed;
    auto *maximize = app.add_subcommand("maximize", "maximize D over local states");
    maximize->add_option("effect", mx.effect, "effect document")->required();
    add_seesaw_flags(maximize, mx.seesaw);
    maximize->add_flag("--renormalize", mx.renormalize, "coarse-grain M_+1 to meet the trace condition");

    SimulateOptions sm;
    sm.seed = env_seed;
    auto *simulate = app.add_subcommand("simulate", "shot-based simulation of the Bell-measurement experiment");
    simulate->add_option("--setting", sm.setting, "setting document (default: built-in setting with D = 2 sqrt 2)");
    simulate->add_option("--shots", sm.shots, "shots per preparation setting")->capture_default_str();
    simulate->add_option("--noise-p", sm.noise_p, "per-qubit depolarizing probability")->capture_default_str();
    simulate->add_option("--readout-flip", sm.readout_flip, "per-bit readout flip probability")->capture_default_str();
    simulate->add_option("--seed", sm.seed, "base seed");
    simulate->add_option("--calibrate-d", sm.calibrate_d, "choose --noise-p so the exact noisy D equals this");
    simulate->add_flag("--pure-mixtures", sm.pure_mixtures, "prepare 1/2 as a 50/50 mixture of |0> and |1>");
    simulate->add_option("--histogram", sm.histogram_csv, "CSV path for the mixed-state Bell histogram");

    TeleportOptions tp;
    tp.seed = env_seed;
    auto *teleport = app.add_subcommand("teleport", "teleportation usefulness of a 4-outcome POVM");
    teleport->add_option("povm", tp.povm, "POVM document")->required();
    teleport->add_option("--mc-samples", tp.mc_samples, "Monte Carlo input states (0 = skip)");
    teleport->add_option("--seed", tp.seed, "Monte Carlo seed");
    teleport->add_option("--corrections", tp.corrections, "standard | identity")->capture_default_str();

    std::string renorm_in;
    std::string renorm_out;
    auto *renorm = app.add_subcommand("renormalize", "coarse-grain an effect to satisfy the trace condition");
    renorm->add_option("effect", renorm_in, "effect document")->required();
    renorm->add_option("-o,--out", renorm_out, "output path")->required();

    std::string fixtures_dir;
    auto *fixtures = app.add_subcommand("fixtures", "write the bundled fixture documents");
    fixtures->add_option("-o,--out", fixtures_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    CommandResult result;
    if (*dvalue) {
        result = cmd_dvalue(dv);
    } else if (*classify) {
        result = cmd_classify(cl);
    } else if (*maximize) {
        result = cmd_maximize(mx);
    } else if (*simulate) {
        result = cmd_simulate(sm);
    } else if (*teleport) {
        result = cmd_teleport(tp);
    } else if (*renorm) {
        result = cmd_renormalize(renorm_in, renorm_out);
    } else if (*fixtures) {
        result = cmd_fixtures(fixtures_dir);
    }

    if (result.report.contains("error")) {
        std::cerr << result.report.dump() << "\n";
    } else {
        std::cout << result.text;
    }
    if (!report_path.empty()) {
        try {
            io::write_text(report_path, result.report.dump(2) + "\n");
        } catch (const Error &e) {
            std::cerr << e.what() << "\n";
            return kExitValidation;
        }
    }
    return result.exit_code;
}
