// Copyright 2026 The qsurrogate Authors
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

#pragma once

/**
 * @file
 * JSON serialization of tables, consistency records and comparison results
 * for command reports. Layouts are documented in docs/formats.md.
 */

#include <string>
#include <string_view>

#include "json.hpp"
#include "qsurrogate/config.hpp"

namespace qsurrogate {

inline constexpr std::string_view kToolName = "qsurrogate";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kReportSchema = "qsurrogate.report/1";

using ReportJson = nlohmann::ordered_json;

[[nodiscard]] std::string sha256_hex(const std::string &bytes);

/// Rows of [re, im] pairs.
[[nodiscard]] ReportJson to_json(const Matrix &m);
/// Rows of reals.
[[nodiscard]] ReportJson to_json(const RealMatrix &m);
[[nodiscard]] ReportJson complex_json(Complex z);

[[nodiscard]] ReportJson observable_json(const SpectralDecomposition &sd);
/// Probabilities in table order, with roundoff negatives clamped to 0.
[[nodiscard]] ReportJson to_json(const BornTable &t);
/// At most `max_entries` amplitudes in table order.
[[nodiscard]] ReportJson to_json(const BiProbTable &t, std::size_t max_entries);
[[nodiscard]] ReportJson to_json(const ConditionRecord &r, const std::vector<double> &values);
[[nodiscard]] ReportJson to_json(const ConsistencyReport &r, const std::vector<double> &values);
[[nodiscard]] ReportJson to_json(const NcgdReport &r);
[[nodiscard]] ReportJson to_json(const BlockStructure &b);
[[nodiscard]] ReportJson to_json(const EquivalenceReport &r);
[[nodiscard]] ReportJson to_json(const ConfigTolerances &t);

/// Two-space indented document with a trailing newline.
[[nodiscard]] std::string dump(const ReportJson &j);

} // namespace qsurrogate
