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
 * Surrogate-field trajectories drawn through the conditional-collapse chain:
 * at each grid time the outcome is drawn from the current state, the state
 * is collapsed onto the observed eigenspace and evolved to the next time.
 * The resulting tuples are distributed exactly as the Born distribution of
 * the model on that grid.
 *
 * Trajectory j of an ensemble with base seed s uses its own engine seeded
 * from (s, j), so ensembles are reproducible regardless of thread count or
 * generation order.
 */

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string_view>
#include <vector>

#include "qsurrogate/process.hpp"

namespace qsurrogate {

inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64 seeded by std::seed_seq{seed_lo32, seed_hi32, index_lo32, index_hi32}; "
    "uniform = (draw >> 11) * 2^-53; v1";

[[nodiscard]] std::mt19937_64 trajectory_engine(std::uint64_t seed, std::uint64_t index);
[[nodiscard]] double uniform01(std::mt19937_64 &engine);

/// Piecewise-constant path through outcome eigenvalues: f(t_i) holds on
/// [t_i, t_{i+1}), and f(t_1) is extended back to [0, t_1).
struct Trajectory {
    TimeGrid grid;
    std::vector<std::size_t> indices;
    std::vector<double> values;

    /// Value at time t in [0, t_n].
    [[nodiscard]] double value_at(double t) const;
};

struct Ensemble {
    TimeGrid grid;
    std::vector<double> outcome_values;
    std::uint64_t seed = 0;
    std::vector<Trajectory> trajectories;

    [[nodiscard]] std::size_t size() const noexcept { return trajectories.size(); }
};

/// Draws one trajectory with the engine for (seed, index).
[[nodiscard]] Trajectory sample_trajectory(const ProcessModel &model, const TimeGrid &grid, std::uint64_t seed,
                                           std::uint64_t index = 0);
[[nodiscard]] Trajectory sample_trajectory(const QuantumSystem &sys, const TimeGrid &grid, std::uint64_t seed,
                                           std::uint64_t index = 0);

/// N trajectories with derived seeds (seed, 0) ... (seed, N - 1).
[[nodiscard]] Ensemble sample_ensemble(const ProcessModel &model, const TimeGrid &grid, std::size_t count,
                                       std::uint64_t seed, unsigned threads = 1);

/// Frequency table of the sampled tuples.
[[nodiscard]] BornTable empirical_joint(const Ensemble &ens);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// (1/N) sum_j f_j(t) f_j(s), summed sequentially in trajectory order.
[[nodiscard]] double autocorrelation(const Ensemble &ens, double t, double s);
[[nodiscard]] Estimate autocorrelation_estimate(const Ensemble &ens, double t, double s);

/// Header row of grid times, then one row of eigenvalues per trajectory.
void write_csv(const Ensemble &ens, std::ostream &out);

} // namespace qsurrogate
