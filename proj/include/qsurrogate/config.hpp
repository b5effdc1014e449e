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
 * Scenario configuration documents. A configuration is a JSON object with
 * a versioned `schema` field; see docs/formats.md for the full layout.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsurrogate/consistency.hpp"
#include "qsurrogate/observer.hpp"
#include "qsurrogate/qrf.hpp"

namespace qsurrogate {

inline constexpr std::string_view kConfigSchema = "qsurrogate.config/1";

/// Malformed or inconsistent configuration. `field` is a dotted path such
/// as "system.H"; `line` is 1-based when it could be located.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, std::optional<std::size_t> line, const std::string &message);

    [[nodiscard]] const std::string &field() const noexcept { return field_; }
    [[nodiscard]] std::optional<std::size_t> line() const noexcept { return line_; }

  private:
    std::string field_;
    std::optional<std::size_t> line_;
};

enum class ScenarioKind { Unitary, Qrf, Joint };

[[nodiscard]] std::string_view kind_name(ScenarioKind k) noexcept;

struct QrfSpec {
    std::shared_ptr<const QRFModel> model;
    std::vector<double> sample_times = kDefaultSampleTimes;
    bool raw_generator = false;
};

struct SamplingSpec {
    std::size_t count = 1000;
    std::uint64_t seed = 1;
    std::string grid;
};

struct SimulateSpec {
    std::vector<double> times;
    std::optional<SpectralDecomposition> x_o;
    std::optional<TimeGrid> observer_grid;
};

struct Caps {
    std::size_t max_table_entries = kDefaultTableCap;
    Index max_joint_dim = kDefaultJointDimCap;
    /// Bi-probability entries written to reports before truncation.
    std::size_t report_table_entries = 4096;
};

struct ConfigTolerances {
    double epsilon = kDefaultEpsilon;
    double hermiticity = kHermiticityTol;
    double density = kDensityTol;
    std::optional<double> cluster;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Unitary;
    std::optional<QuantumSystem> system;
    std::optional<ObserverSystem> observer;
    QrfSpec qrf;
    /// Named grids in document order.
    std::vector<std::pair<std::string, TimeGrid>> grids;
    std::optional<std::size_t> n_max;
    ConfigTolerances tolerances;
    std::optional<SamplingSpec> sampling;
    std::optional<SimulateSpec> simulate;
    Caps caps;

    /// The measured process: the unitary system or the QRF model.
    std::shared_ptr<const ProcessModel> process;

    [[nodiscard]] const TimeGrid &grid(const std::string &name) const;
};

/// Parses a configuration document. Throws ConfigError.
[[nodiscard]] ScenarioConfig parse_config(const std::string &text);

} // namespace qsurrogate
