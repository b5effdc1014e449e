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
 * Numerical tests of the Kolmogorov consistency (KC), consistent
 * measurements (CM) and surrogate field (SF) conditions, together with the
 * unconditional identities that tie Born distributions and bi-probabilities
 * together.
 *
 * Every record keeps the raw maximal violation so results can be
 * re-thresholded; `passed` is simply violation <= threshold.
 */

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qsurrogate/process.hpp"

namespace qsurrogate {

inline constexpr double kDefaultEpsilon = 1e-8;
/// Agreement required between the complex-sum and real-part forms of CM.
inline constexpr double kCmFormAgreementTol = 1e-12;

enum class Condition {
    Causality,
    Kolmogorov,
    ConsistentMeasurements,
    CmRealForm,
    SurrogateField,
    BiConsistency,
    GeneralizedRelation,
};

[[nodiscard]] std::string_view condition_name(Condition c) noexcept;

/// Argument tuple at which a violation is attained. `position` is the
/// marginalized grid index where one applies; `plus` and `minus` are the
/// remaining outcome sequences (minus is empty for Born-only conditions).
struct Witness {
    std::optional<std::size_t> position;
    OutcomeSequence plus;
    OutcomeSequence minus;
};

struct ConditionRecord {
    Condition condition;
    double max_abs_violation = 0.0;
    std::optional<Witness> witness;
    double threshold = kDefaultEpsilon;
    bool passed = true;
    /// Grid positions the condition was quantified over.
    std::vector<std::size_t> positions;
};

struct ConsistencyReport {
    TimeGrid grid;
    std::size_t order;
    std::vector<ConditionRecord> records;

    [[nodiscard]] bool has(Condition c) const;
    [[nodiscard]] const ConditionRecord &get(Condition c) const;
    void append(const ConsistencyReport &other);
};

/// KC over every position of the grid, plus the causality record (latest
/// position only). Requires grid.size() >= 2.
[[nodiscard]] ConsistencyReport check_kc(const ProcessModel &model, const TimeGrid &grid,
                                         double epsilon = kDefaultEpsilon, const TableLimits &limits = {});
[[nodiscard]] ConsistencyReport check_kc(const QuantumSystem &sys, const TimeGrid &grid,
                                         double epsilon = kDefaultEpsilon, const TableLimits &limits = {});

/// CM on a bi-probability table, plus the agreement of its real-part form.
[[nodiscard]] ConsistencyReport check_cm(const BiProbTable &table, double epsilon = kDefaultEpsilon);

/// SF: max |Q(f, g)| over f != g. Witnesses are reported with plus > minus
/// in table order (|Q(f, g)| = |Q(g, f)|).
[[nodiscard]] ConsistencyReport check_sf(const BiProbTable &table, double epsilon = kDefaultEpsilon);

/// Summing Q_n over a paired position reproduces Q_{n-1} on the reduced grid.
[[nodiscard]] ConsistencyReport check_bi_consistency(const ProcessModel &model, const TimeGrid &grid,
                                                     double epsilon = kDefaultEpsilon,
                                                     const TableLimits &limits = {});

/// max |(P_{n-1} - sum_{f_i} P_n) - sum_{f_i != g_i} Q_n| over positions and
/// diagonal assignments of the remaining outcomes. Requires grid.size() >= 2.
[[nodiscard]] double verify_generalized_relation(const ProcessModel &model, const TimeGrid &grid,
                                                 const TableLimits &limits = {});
[[nodiscard]] double verify_generalized_relation(const QuantumSystem &sys, const TimeGrid &grid,
                                                 const TableLimits &limits = {});

/// All of the above on one grid.
[[nodiscard]] ConsistencyReport analyze(const ProcessModel &model, const TimeGrid &grid,
                                        double epsilon = kDefaultEpsilon, const TableLimits &limits = {});

struct CounterexampleSearch {
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    Index dim = 3;
    std::size_t order = 3;
    double epsilon = kDefaultEpsilon;
};

/// Random search for a system whose bi-probabilities satisfy CM but not SF
/// on a random grid. No instance is known; an empty result is expected.
[[nodiscard]] std::optional<QuantumSystem> search_cm_without_sf(const CounterexampleSearch &params);

} // namespace qsurrogate
