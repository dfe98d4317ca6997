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
 * Subcommands of the dualchsh CLI. Each returns a RunReport document plus
 * human-readable text and an exit code, so tests can drive them directly.
 */

#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "dualchsh/fixtures.hpp"
#include "dualchsh/io.hpp"
#include "dualchsh/separability.hpp"
#include "dualchsh/teleportation.hpp"

namespace dualchsh::cli {

using io::json;

inline constexpr const char *kVersion = "0.1.0";
inline constexpr const char *kSeedEnv = "DUALCHSH_SEED";

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNoConvergence = 3 };

struct CommandResult {
    int exit_code = kExitOk;
    json report;
    std::string text;
};

/// Seed from DUALCHSH_SEED, else 0.
inline auto default_seed() -> std::uint64_t {
    const char *env = std::getenv(kSeedEnv);
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    try {
        return std::stoull(env);
    } catch (const std::exception &) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string(kSeedEnv) + " is not an unsigned integer");
    }
}

inline auto sha256_hex(const std::string &data) -> std::string {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(),
               nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) {
        out << std::hex << std::setw(2) << std::setfill('0')
            << static_cast<int>(digest[i]);
    }
    return out.str();
}

/// 9 significant digits.
inline auto fmt(double x) -> std::string {
    std::ostringstream out;
    out << std::setprecision(9) << x;
    return out.str();
}

/// Loads a document and records its path and content hash.
class Inputs {
  public:
    auto load(const std::string &path) -> json {
        const std::string text = io::read_text(path);
        records_.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
        return io::parse_text(text, path);
    }
    auto add_builtin(const std::string &name) -> void {
        records_.push_back({{"path", "builtin:" + name}, {"sha256", nullptr}});
    }
    [[nodiscard]] auto records() const -> json { return records_; }

  private:
    json records_ = json::array();
};

inline auto base_report(const std::string &command, const Inputs &inputs,
                        json config) -> json {
    return {{"command", command},
            {"version", kVersion},
            {"inputs", inputs.records()},
            {"config", std::move(config)},
            {"results", json::object()}};
}

inline auto bloch_json(const QuantumState &s) -> json {
    const BlochVector r = state_to_bloch(s);
    return json::array({r.x, r.y, r.z});
}

inline auto setting_json(const ChshSetting &s) -> json {
    json out = io::to_json(s);
    if (s.dims() == DimSplit{2, 2}) {
        out["bloch_a"] = json::array({bloch_json(s.rho_a()[0]), bloch_json(s.rho_a()[1])});
        out["bloch_b"] = json::array({bloch_json(s.rho_b()[0]), bloch_json(s.rho_b()[1])});
    }
    return out;
}

inline auto matrix3_json(const RealMatrix3 &t) -> json {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) {
        rows.push_back(json::array({t(i, 0), t(i, 1), t(i, 2)}));
    }
    return rows;
}

inline auto error_result(const std::string &command, const Error &e) -> CommandResult {
    CommandResult r;
    r.exit_code = kExitValidation;
    r.report = {{"command", command},
                {"version", kVersion},
                {"error", {{"code", std::string(to_string(e.code()))},
                           {"message", e.what()}}}};
    r.text = "error: " + std::string(e.what()) + "\n";
    return r;
}

template <class F>
auto guarded(const std::string &command, F &&body) -> CommandResult {
    try {
        return body();
    } catch (const Error &e) {
        return error_result(command, e);
    } catch (const io::json::exception &e) {
        return error_result(command, Error(ErrorCode::ParseError, e.what()));
    }
}

// ----- dvalue ---------------------------------------------------------------

struct DvalueOptions {
    std::optional<std::string> setting;
    std::array<std::string, 2> rho_a;
    std::array<std::string, 2> rho_b;
    std::string observable; ///< effect or observable document
    bool renormalize = false;
};

inline auto load_setting(const DvalueOptions &o, Inputs &inputs) -> ChshSetting {
    if (o.setting) {
        return io::setting_from_json(inputs.load(*o.setting));
    }
    for (const auto *p : {&o.rho_a[0], &o.rho_a[1], &o.rho_b[0], &o.rho_b[1],
                          &o.observable}) {
        if (p->empty()) {
            throw Error(ErrorCode::InvalidArgument,
                        "give --setting or all of --a0 --a1 --b0 --b1 --effect");
        }
    }
    std::array<QuantumState, 2> a{io::state_from_json(inputs.load(o.rho_a[0])),
                                  io::state_from_json(inputs.load(o.rho_a[1]))};
    std::array<QuantumState, 2> b{io::state_from_json(inputs.load(o.rho_b[0])),
                                  io::state_from_json(inputs.load(o.rho_b[1]))};
    return {a, b, io::observable_from_json(inputs.load(o.observable))};
}

inline auto cmd_dvalue(const DvalueOptions &o) -> CommandResult {
    return guarded("dvalue", [&] {
        Inputs inputs;
        ChshSetting loaded = load_setting(o, inputs);
        const bool trace_ok_before = check_trace_condition(loaded.observable());
        const ChshSetting s =
            o.renormalize ? ChshSetting(loaded.rho_a(), loaded.rho_b(),
                                        renormalize_effect(loaded.observable()))
                          : loaded;
        const auto e = d_terms(s);
        const double d = d_value(s);
        const bool trace_ok = check_trace_condition(s.observable());
        CommandResult r;
        r.report = base_report("dvalue", inputs, {{"renormalize", o.renormalize}});
        r.report["results"] = {
            {"D", d},
            {"E", {{"E00", e[0][0]}, {"E01", e[0][1]}, {"E10", e[1][0]}, {"E11", e[1][1]}}},
            {"trace_condition", trace_ok},
            {"trace_condition_before_renormalize", trace_ok_before},
            {"dual_tsirelson_bound", dual_tsirelson(s.rho_a(), s.rho_b())},
            {"violates_dual_chsh", trace_ok && d > 2.0 + kViolationTol},
        };
        std::ostringstream t;
        t << "D = " << fmt(d) << "\n"
          << "E00 = " << fmt(e[0][0]) << "  E01 = " << fmt(e[0][1])
          << "  E10 = " << fmt(e[1][0]) << "  E11 = " << fmt(e[1][1]) << "\n"
          << "trace condition: " << (trace_ok ? "satisfied" : "violated") << "\n"
          << "dual Tsirelson bound for these states = "
          << fmt(r.report["results"]["dual_tsirelson_bound"].get<double>()) << "\n";
        if (!trace_ok) {
            t << "note: |D| <= 2 is only guaranteed under the trace condition; "
                 "rerun with --renormalize\n";
        }
        r.text = t.str();
        return r;
    });
}

// ----- classify -------------------------------------------------------------

struct ClassifyOptions {
    std::string effect;
    SeesawOptions seesaw{};
};

inline auto cmd_classify(const ClassifyOptions &o) -> CommandResult {
    return guarded("classify", [&] {
        Inputs inputs;
        const BinaryObservable m = io::observable_from_json(inputs.load(o.effect));
        const Classification c = classify_effect(m.plus(), o.seesaw);
        CommandResult r;
        r.report = base_report("classify", inputs,
                               {{"restarts", o.seesaw.restarts},
                                {"max_iters", o.seesaw.max_iters},
                                {"tol", o.seesaw.tol},
                                {"seed", o.seesaw.seed}});
        json results = {
            {"verdict", std::string(to_string(c.verdict))},
            {"evidence", std::string(to_string(c.evidence))},
            {"renormalized", c.renormalized},
            {"ppt", {{"min_eigenvalue", c.ppt.min_eigenvalue},
                     {"normalization", c.ppt.normalization},
                     {"normalized_min_eigenvalue", c.ppt.normalized_min_eigenvalue}}},
            {"violates_dual_chsh", c.violates_dual_chsh},
        };
        std::ostringstream t;
        t << "verdict: " << to_string(c.verdict) << " (" << to_string(c.evidence) << ")\n"
          << "partial transpose min eigenvalue = " << fmt(c.ppt.min_eigenvalue) << "\n";
        if (c.renormalized) {
            t << "effect coarse-grained to M_+1 / tr(M_+1) before analysis\n";
        }
        if (c.dual_chsh) {
            results["dual_chsh"] = {{"max_d", c.dual_chsh->max_d},
                                    {"method", std::string(to_string(c.dual_chsh->method))},
                                    {"converged", c.dual_chsh->converged},
                                    {"setting", setting_json(c.dual_chsh->setting)},
                                    {"d_value_on_setting", d_value(c.dual_chsh->setting)}};
            t << "max D = " << fmt(c.dual_chsh->max_d) << " ("
              << to_string(c.dual_chsh->method) << "), dual CHSH "
              << (c.violates_dual_chsh ? "violated" : "satisfied") << "\n";
        }
        r.report["results"] = std::move(results);
        r.text = t.str();
        return r;
    });
}

// ----- maximize -------------------------------------------------------------

struct MaximizeOptions {
    std::string effect;
    SeesawOptions seesaw{};
    bool renormalize = false;
};

inline auto cmd_maximize(const MaximizeOptions &o) -> CommandResult {
    return guarded("maximize", [&] {
        Inputs inputs;
        BinaryObservable m = io::observable_from_json(inputs.load(o.effect));
        const DimSplit split = m.plus().op().require_split();
        if (o.renormalize) {
            m = renormalize_effect(m);
        }
        if (!check_trace_condition(m)) {
            throw Error(ErrorCode::TraceConditionViolated,
                        "tr(M_+1) and tr(M_-1) both exceed 1; pass --renormalize");
        }
        CommandResult r;
        r.report = base_report("maximize", inputs,
                               {{"restarts", o.seesaw.restarts},
                                {"max_iters", o.seesaw.max_iters},
                                {"tol", o.seesaw.tol},
                                {"seed", o.seesaw.seed},
                                {"renormalize", o.renormalize}});
        const MaxDReport seesaw = maximize_d_seesaw(m, split, o.seesaw);
        json results = {{"seesaw", {{"max_d", seesaw.max_d},
                                    {"iterations", seesaw.iterations},
                                    {"converged", seesaw.converged},
                                    {"setting", setting_json(seesaw.optimal_setting)}}}};
        std::ostringstream t;
        double best = seesaw.max_d;
        if (split == DimSplit{2, 2}) {
            const MaxDReport closed = max_d_qubit(m.plus());
            const auto sv = singular_values(t_matrix(m.plus()).t);
            results["closed_form"] = {{"max_d", closed.max_d},
                                      {"singular_values", sv},
                                      {"setting", setting_json(closed.optimal_setting)}};
            results["agreement"] = std::abs(closed.max_d - seesaw.max_d);
            best = closed.max_d;
            t << "max D (closed form) = " << fmt(closed.max_d) << "\n";
        }
        t << "max D (seesaw)      = " << fmt(seesaw.max_d)
          << (seesaw.converged ? " (converged)" : " (NOT converged)") << "\n"
          << "dual CHSH " << (best > 2.0 + kViolationTol ? "violated" : "satisfied") << "\n";
        results["max_d"] = best;
        results["violates_dual_chsh"] = best > 2.0 + kViolationTol;
        r.report["results"] = std::move(results);
        r.text = t.str();
        if (!seesaw.converged) {
            r.exit_code = kExitNoConvergence;
        }
        return r;
    });
}

// ----- simulate -------------------------------------------------------------

struct SimulateOptions {
    std::optional<std::string> setting; ///< default: paper_setting()
    std::int64_t shots = 100000;
    double noise_p = 0.0;
    double readout_flip = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> calibrate_d;
    bool pure_mixtures = false;
    std::optional<std::string> histogram_csv;
};

inline auto cmd_simulate(const SimulateOptions &o) -> CommandResult {
    return guarded("simulate", [&] {
        Inputs inputs;
        std::optional<ChshSetting> loaded;
        if (o.setting) {
            loaded.emplace(io::setting_from_json(inputs.load(*o.setting)));
        } else {
            inputs.add_builtin("paper_setting");
            loaded.emplace(paper_setting());
        }
        const ChshSetting &s = *loaded;
        NoiseModel noise{o.noise_p, o.readout_flip};
        json calibration = nullptr;
        if (o.calibrate_d) {
            noise.depolarizing_p = calibrate_depolarizing(s, *o.calibrate_d, o.readout_flip);
            calibration = {{"target_d", *o.calibrate_d},
                           {"depolarizing_p", noise.depolarizing_p},
                           {"exact_noisy_d", exact_noisy_d(s, noise)}};
        }
        ExperimentOptions opts{o.shots, noise, o.seed, o.pure_mixtures};
        const ExperimentResult res = run_dual_chsh_experiment(s, opts);

        CommandResult r;
        r.report = base_report("simulate", inputs,
                               {{"shots_per_setting", o.shots},
                                {"seed", o.seed},
                                {"noise", {{"depolarizing_p", noise.depolarizing_p},
                                           {"readout_flip", noise.readout_flip}}},
                                {"pure_mixture_preparations", o.pure_mixtures},
                                {"calibrate_d", o.calibrate_d ? json(*o.calibrate_d) : json(nullptr)}});
        json settings = json::array();
        for (const auto &rec : res.settings) {
            settings.push_back({{"index", rec.index},
                                {"term", json::array({rec.term_i, rec.term_j})},
                                {"preparation", std::string(to_string(rec.label))},
                                {"seed", rec.seed},
                                {"exact_probs", rec.exact_probs},
                                {"counts", rec.counts.counts},
                                {"shots", rec.counts.shots}});
        }
        json terms = json::array();
        for (const auto &e : res.estimate.per_term) {
            terms.push_back({{"value", e.value}, {"std_error", e.std_error}});
        }
        r.report["results"] = {
            {"D", res.estimate.value},
            {"std_error", res.estimate.std_error},
            {"per_term", terms},
            {"target_outcome", std::string(to_string(res.target))},
            {"exact_d_noiseless", d_value(s)},
            {"exact_d_noisy", exact_noisy_d(s, noise)},
            {"calibration", calibration},
            {"settings", settings},
            {"hardware_reference", {{"D", kHardwareD}, {"D_error", kHardwareDError},
                                    {"mixed_histogram", kHardwareMixedHistogram}}},
        };
        std::ostringstream t;
        t << "D = " << fmt(res.estimate.value) << " +- " << fmt(res.estimate.std_error)
          << " (" << o.shots << " shots x 16 settings, seed " << o.seed << ")\n"
          << "exact D at this noise = " << fmt(exact_noisy_d(s, noise)) << "\n";
        if (o.calibrate_d) {
            t << "calibrated depolarizing_p = " << fmt(noise.depolarizing_p) << "\n";
        }

        // Bell histogram of the maximally mixed two-qubit state.
        const QuantumState mixed = maximally_mixed(4);
        Rng rng(o.seed + 16);
        const BellProbs exact = noisy_bell_probs(mixed, noise);
        const ShotCounts hist = sample_counts(exact, o.shots, rng);
        json histogram = json::array();
        std::ostringstream csv;
        csv << "outcome,count,frequency,exact_probability,hardware_reference\n";
        for (auto out : kBellOutcomes) {
            const auto k = static_cast<std::size_t>(out);
            const double freq = hist.frequency(out);
            histogram.push_back({{"outcome", std::string(to_string(out))},
                                 {"count", hist.counts[k]},
                                 {"frequency", freq},
                                 {"exact_probability", exact[k]}});
            csv << to_string(out) << ',' << hist.counts[k] << ',' << fmt(freq) << ','
                << fmt(exact[k]) << ',' << fmt(kHardwareMixedHistogram[k]) << '\n';
        }
        r.report["results"]["mixed_state_histogram"] = histogram;
        if (o.histogram_csv) {
            io::write_text(*o.histogram_csv, csv.str());
            t << "histogram written to " << *o.histogram_csv << "\n";
        }
        r.text = t.str();
        return r;
    });
}

// ----- teleport -------------------------------------------------------------

struct TeleportOptions {
    std::string povm;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 0;
    std::string corrections = "standard"; ///< standard | identity
};

inline auto cmd_teleport(const TeleportOptions &o) -> CommandResult {
    return guarded("teleport", [&] {
        Inputs inputs;
        const Povm povm = io::povm_from_json(inputs.load(o.povm));
        const FidelityReport f = max_average_fidelity(povm);
        const auto ts = t_matrices(povm);
        const auto link = dual_chsh_link(povm);
        CommandResult r;
        r.report = base_report("teleport", inputs,
                               {{"mc_samples", o.mc_samples},
                                {"seed", o.seed},
                                {"corrections", o.corrections}});
        json outcomes = json::array();
        for (std::size_t i = 0; i < 4; ++i) {
            outcomes.push_back({{"t_matrix", matrix3_json(ts[i])},
                                {"nuclear_norm", f.nuclear_norms[i]},
                                {"max_d_renormalized", link[i].max_d},
                                {"violates_dual_chsh", link[i].violates},
                                {"renormalized", link[i].renormalized},
                                {"renormalized_nuclear_norm", link[i].nuclear_norm}});
        }
        json results = {{"f_max", f.f_max},
                        {"useful", f.useful},
                        {"threshold_margin", f.threshold_margin},
                        {"nuclear_norms", f.nuclear_norms},
                        {"outcomes", outcomes}};
        std::ostringstream t;
        t << "F_max = " << fmt(f.f_max) << " (" << (f.useful ? "useful" : "not useful")
          << " for teleportation; sum of nuclear norms - 4 = " << fmt(f.threshold_margin)
          << ")\n";
        if (o.mc_samples > 0) {
            std::array<CMatrix, 4> us;
            if (o.corrections == "standard") {
                us = standard_corrections();
            } else if (o.corrections == "identity") {
                us.fill(CMatrix::Identity(2, 2));
            } else {
                throw Error(ErrorCode::InvalidArgument,
                            "--corrections must be standard or identity");
            }
            const McEstimate mc = average_fidelity_mc(povm, us, o.mc_samples, o.seed);
            results["monte_carlo"] = {{"estimate", mc.estimate},
                                      {"std_error", mc.std_error},
                                      {"n_samples", mc.n_samples}};
            t << "Monte Carlo F (" << o.corrections << " corrections) = "
              << fmt(mc.estimate) << " +- " << fmt(mc.std_error) << "\n";
        }
        r.report["results"] = std::move(results);
        r.text = t.str();
        return r;
    });
}

// ----- renormalize, fixtures ------------------------------------------------

inline auto cmd_renormalize(const std::string &effect_path,
                            const std::string &out_path) -> CommandResult {
    return guarded("renormalize", [&] {
        Inputs inputs;
        const BinaryObservable m = io::observable_from_json(inputs.load(effect_path));
        const BinaryObservable n = renormalize_effect(m);
        const bool changed = max_abs_diff(m.plus().op(), n.plus().op()) != 0.0;
        io::write_text(out_path, io::to_json(n.plus(), {{"renormalized_from", effect_path}}).dump(2) + "\n");
        CommandResult r;
        r.report = base_report("renormalize", inputs, json::object());
        r.report["results"] = {{"changed", changed},
                               {"trace_before", m.plus().trace()},
                               {"trace_after", n.plus().trace()},
                               {"keep_probability", changed ? 1.0 / m.plus().trace() : 1.0},
                               {"output", out_path}};
        r.text = changed ? "M_+1 divided by its trace " + fmt(m.plus().trace()) + "\n"
                         : std::string("trace condition already holds; effect unchanged\n");
        return r;
    });
}

inline auto cmd_fixtures(const std::string &dir) -> CommandResult {
    return guarded("fixtures", [&] {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            throw Error(ErrorCode::InvalidArgument, "cannot create " + dir + ": " + ec.message());
        }
        CommandResult r;
        json written = json::array();
        for (const auto &[name, doc] : fixtures::bundled()) {
            const std::string path = dir + "/" + name;
            io::write_text(path, doc.dump(2) + "\n");
            written.push_back(path);
        }
        r.report = {{"command", "fixtures"}, {"version", kVersion},
                    {"results", {{"written", written}}}};
        r.text = std::to_string(written.size()) + " fixtures written to " + dir + "\n";
        return r;
    });
}

} // namespace dualchsh::cli
