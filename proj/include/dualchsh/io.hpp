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
 * JSON operator documents.
 *
 * One document per object:
 *
 *   {
 *     "format": "dualchsh-operator", "version": 1,
 *     "kind": "state" | "effect" | "observable" | "povm" | "setting",
 *     "dims": [d_A, d_B],
 *     "matrix": [[[re, im], ...], ...],          // state, effect, observable
 *     "elements": [matrix, ...],                 // povm
 *     "rho_a": [matrix, matrix], "rho_b": [...], // setting
 *     "effect": matrix,                          // setting, M_+1
 *     "metadata": {"key": "value"}
 *   }
 *
 * An "observable" matrix is the expectation operator M = 2 M_+1 - 1. For a
 * "state" the dims may be a single entry [d].
 */

#pragma once

#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dual_chsh.hpp"

namespace dualchsh::io {

using json = nlohmann::json;

inline constexpr const char *kFormatName = "dualchsh-operator";
inline constexpr int kFormatVersion = 1;

using Metadata = std::map<std::string, std::string>;

inline auto matrix_to_json(const CMatrix &m) -> json {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline auto parse_error(const std::string &what) -> Error {
    return Error(ErrorCode::ParseError, what);
}

inline auto matrix_from_json(const json &j, std::size_t expected_dim,
                             const std::string &field) -> CMatrix {
    if (!j.is_array()) {
        throw parse_error(field + ": matrix must be an array of rows");
    }
    if (j.size() != expected_dim) {
        throw Error(ErrorCode::DimMismatch,
                    field + ": has " + std::to_string(j.size()) +
                        " rows, dims require " + std::to_string(expected_dim));
    }
    const auto n = static_cast<Eigen::Index>(expected_dim);
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != expected_dim) {
            throw Error(ErrorCode::DimMismatch,
                        field + ": row " + std::to_string(i) +
                            " does not have " + std::to_string(expected_dim) +
                            " entries");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            const json &entry = row[static_cast<std::size_t>(k)];
            if (entry.is_number()) {
                m(i, k) = Complex{entry.get<double>(), 0.0};
            } else if (entry.is_array() && entry.size() == 2 &&
                       entry[0].is_number() && entry[1].is_number()) {
                m(i, k) = Complex{entry[0].get<double>(), entry[1].get<double>()};
            } else {
                throw parse_error(field + ": entry (" + std::to_string(i) +
                                  ", " + std::to_string(k) +
                                  ") must be [re, im]");
            }
        }
    }
    return m;
}

struct Header {
    std::string kind;
    std::vector<std::size_t> dims;
    Metadata metadata;

    [[nodiscard]] auto total_dim() const -> std::size_t {
        std::size_t d = 1;
        for (auto k : dims) {
            d *= k;
        }
        return d;
    }
    [[nodiscard]] auto split() const -> std::optional<DimSplit> {
        if (dims.size() == 2) {
            return DimSplit{dims[0], dims[1]};
        }
        return std::nullopt;
    }
};

inline auto parse_header(const json &doc) -> Header {
    if (!doc.is_object()) {
        throw parse_error("document must be a JSON object");
    }
    if (doc.value("format", std::string{}) != kFormatName) {
        throw parse_error(std::string("missing \"format\": \"") + kFormatName +
                          "\"");
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != kFormatVersion) {
        throw parse_error("unsupported format version");
    }
    Header h;
    if (!doc.contains("kind") || !doc["kind"].is_string()) {
        throw parse_error("missing string field \"kind\"");
    }
    h.kind = doc["kind"].get<std::string>();
    if (!doc.contains("dims") || !doc["dims"].is_array() ||
        doc["dims"].empty() || doc["dims"].size() > 2) {
        throw Error(ErrorCode::DimMismatch,
                    "\"dims\" must be an array of one or two positive integers");
    }
    for (const auto &d : doc["dims"]) {
        if (!d.is_number_integer() || d.get<long long>() <= 0) {
            throw Error(ErrorCode::DimMismatch,
                        "\"dims\" entries must be positive integers");
        }
        h.dims.push_back(d.get<std::size_t>());
    }
    if (doc.contains("metadata")) {
        if (!doc["metadata"].is_object()) {
            throw parse_error("\"metadata\" must be an object of strings");
        }
        for (const auto &[k, v] : doc["metadata"].items()) {
            h.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
    }
    return h;
}

inline auto make_header(const std::string &kind,
                        const std::vector<std::size_t> &dims,
                        const Metadata &metadata) -> json {
    json doc;
    doc["format"] = kFormatName;
    doc["version"] = kFormatVersion;
    doc["kind"] = kind;
    doc["dims"] = dims;
    doc["metadata"] = metadata;
    return doc;
}

inline auto dims_of(const OperatorMatrix &op) -> std::vector<std::size_t> {
    if (op.split()) {
        return {op.split()->a, op.split()->b};
    }
    return {op.dim()};
}

inline auto require_kind(const Header &h, const std::string &kind) -> void {
    if (h.kind != kind) {
        throw parse_error("expected kind \"" + kind + "\", found \"" + h.kind +
                          "\"");
    }
}

inline auto require_field(const json &doc, const char *name) -> const json & {
    if (!doc.contains(name)) {
        throw parse_error(std::string("missing field \"") + name + "\"");
    }
    return doc[name];
}

// ----- writers --------------------------------------------------------------

inline auto to_json(const QuantumState &s, const Metadata &metadata = {})
    -> json {
    json doc = make_header("state", dims_of(s.op()), metadata);
    doc["matrix"] = matrix_to_json(s.matrix());
    return doc;
}

inline auto to_json(const Effect &e, const Metadata &metadata = {}) -> json {
    json doc = make_header("effect", dims_of(e.op()), metadata);
    doc["matrix"] = matrix_to_json(e.matrix());
    return doc;
}

inline auto observable_to_json(const BinaryObservable &m,
                               const Metadata &metadata = {}) -> json {
    const OperatorMatrix expectation = m.expectation();
    json doc = make_header("observable", dims_of(expectation), metadata);
    doc["matrix"] = matrix_to_json(expectation.matrix());
    return doc;
}

inline auto to_json(const Povm &p, const Metadata &metadata = {}) -> json {
    json doc = make_header("povm", dims_of(p[0].op()), metadata);
    json elements = json::array();
    for (const auto &e : p.effects()) {
        elements.push_back(matrix_to_json(e.matrix()));
    }
    doc["elements"] = std::move(elements);
    return doc;
}

inline auto to_json(const ChshSetting &s, const Metadata &metadata = {})
    -> json {
    const DimSplit d = s.dims();
    json doc = make_header("setting", {d.a, d.b}, metadata);
    doc["rho_a"] = json::array({matrix_to_json(s.rho_a()[0].matrix()),
                                matrix_to_json(s.rho_a()[1].matrix())});
    doc["rho_b"] = json::array({matrix_to_json(s.rho_b()[0].matrix()),
                                matrix_to_json(s.rho_b()[1].matrix())});
    doc["effect"] = matrix_to_json(s.observable().plus().matrix());
    return doc;
}

// ----- readers (validate on load) -------------------------------------------

inline auto state_from_json(const json &doc) -> QuantumState {
    const Header h = parse_header(doc);
    require_kind(h, "state");
    return QuantumState(OperatorMatrix(
        matrix_from_json(require_field(doc, "matrix"), h.total_dim(), "matrix"),
        h.split()));
}

inline auto effect_from_json(const json &doc) -> Effect {
    const Header h = parse_header(doc);
    require_kind(h, "effect");
    return Effect(OperatorMatrix(
        matrix_from_json(require_field(doc, "matrix"), h.total_dim(), "matrix"),
        h.split()));
}

/// Accepts "effect" (M_+1) and "observable" (M = 2 M_+1 - 1) documents.
inline auto observable_from_json(const json &doc) -> BinaryObservable {
    const Header h = parse_header(doc);
    const OperatorMatrix op(
        matrix_from_json(require_field(doc, "matrix"), h.total_dim(), "matrix"),
        h.split());
    if (h.kind == "effect") {
        return BinaryObservable::from_plus(Effect(op));
    }
    if (h.kind == "observable") {
        return BinaryObservable::from_expectation(op);
    }
    throw parse_error("expected kind \"effect\" or \"observable\", found \"" +
                      h.kind + "\"");
}

inline auto povm_from_json(const json &doc) -> Povm {
    const Header h = parse_header(doc);
    require_kind(h, "povm");
    const json &elements = require_field(doc, "elements");
    if (!elements.is_array()) {
        throw parse_error("\"elements\" must be an array of matrices");
    }
    std::vector<Effect> effects;
    for (std::size_t k = 0; k < elements.size(); ++k) {
        effects.emplace_back(OperatorMatrix(
            matrix_from_json(elements[k], h.total_dim(),
                             "elements[" + std::to_string(k) + "]"),
            h.split()));
    }
    return Povm(std::move(effects));
}

inline auto setting_from_json(const json &doc) -> ChshSetting {
    const Header h = parse_header(doc);
    require_kind(h, "setting");
    if (h.dims.size() != 2) {
        throw Error(ErrorCode::DimMismatch, "setting needs dims [d_A, d_B]");
    }
    auto pair = [&](const char *name, std::size_t d) {
        const json &p = require_field(doc, name);
        if (!p.is_array() || p.size() != 2) {
            throw parse_error(std::string("\"") + name +
                              "\" must hold two matrices");
        }
        return std::array<QuantumState, 2>{
            QuantumState(OperatorMatrix(
                matrix_from_json(p[0], d, std::string(name) + "[0]"))),
            QuantumState(OperatorMatrix(
                matrix_from_json(p[1], d, std::string(name) + "[1]")))};
    };
    auto rho_a = pair("rho_a", h.dims[0]);
    auto rho_b = pair("rho_b", h.dims[1]);
    const Effect m1(OperatorMatrix(
        matrix_from_json(require_field(doc, "effect"), h.total_dim(), "effect"),
        h.split()));
    return {std::move(rho_a), std::move(rho_b),
            BinaryObservable::from_plus(m1)};
}

inline auto read_text(const std::string &path) -> std::string {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline auto parse_text(const std::string &text, const std::string &origin)
    -> json {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::ParseError, origin + ": " + e.what());
    }
}

inline auto write_text(const std::string &path, const std::string &text)
    -> void {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    }
    out << text;
}

} // namespace dualchsh::io
