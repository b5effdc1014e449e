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
 * Multi-time Born distributions and bi-probabilities of a measured
 * observable on a time grid.
 *
 * Outcome sequences are stored in time order: element 0 is the outcome at
 * the earliest grid time t_1. Dense tables enumerate sequences
 * lexicographically with t_1 as the most significant digit.
 */

#include <cstdint>
#include <memory>
#include <vector>

#include "qsurrogate/linalg.hpp"
#include "qsurrogate/spectral.hpp"

namespace qsurrogate {

inline constexpr double kProbFloor = 1e-14;
inline constexpr std::size_t kDefaultTableCap = 1'000'000;

struct TableLimits {
    std::size_t max_entries = kDefaultTableCap;
};

/// Strictly increasing positive measurement times 0 < t_1 < ... < t_n.
class TimeGrid {
  public:
    explicit TimeGrid(std::vector<double> times);

    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return times_.at(i); }
    [[nodiscard]] const std::vector<double> &times() const noexcept { return times_; }
    [[nodiscard]] double back() const { return times_.back(); }

    /// The grid with the time at `position` removed. Requires size() >= 2.
    [[nodiscard]] TimeGrid without(std::size_t position) const;
    /// The first n times.
    [[nodiscard]] TimeGrid prefix(std::size_t n) const;

    bool operator==(const TimeGrid &) const = default;

  private:
    std::vector<double> times_;
};

using OutcomeSequence = std::vector<std::size_t>;

/// Mixed-radix enumeration of outcome sequences of fixed length.
class SequenceIndexer {
  public:
    SequenceIndexer(std::size_t num_outcomes, std::size_t length);

    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    [[nodiscard]] std::size_t length() const noexcept { return length_; }
    [[nodiscard]] std::size_t num_outcomes() const noexcept { return m_; }
    [[nodiscard]] std::size_t flat(const OutcomeSequence &seq) const;
    [[nodiscard]] OutcomeSequence sequence(std::size_t flat) const;

  private:
    std::size_t m_;
    std::size_t length_;
    std::size_t count_;
};

/// Checked m^k; throws TableTooLarge past `cap`.
[[nodiscard]] std::size_t table_size(std::size_t m, std::size_t k, std::size_t cap);

class BornTable {
  public:
    BornTable(TimeGrid grid, std::vector<double> outcome_values, std::vector<double> probs);

    [[nodiscard]] const TimeGrid &grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t order() const noexcept { return grid_.size(); }
    [[nodiscard]] const std::vector<double> &outcome_values() const noexcept { return values_; }
    [[nodiscard]] const SequenceIndexer &indexer() const noexcept { return indexer_; }
    [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
    [[nodiscard]] double operator[](std::size_t flat) const { return probs_[flat]; }
    [[nodiscard]] double at(const OutcomeSequence &seq) const { return probs_[indexer_.flat(seq)]; }
    [[nodiscard]] const std::vector<double> &probabilities() const noexcept { return probs_; }
    [[nodiscard]] double total() const;

  private:
    TimeGrid grid_;
    std::vector<double> values_;
    SequenceIndexer indexer_;
    std::vector<double> probs_;
};

/// Q_n(f, f_-) stored densely; flat index = plus * m^n + minus.
class BiProbTable {
  public:
    BiProbTable(TimeGrid grid, std::vector<double> outcome_values, std::vector<Complex> amps);

    [[nodiscard]] const TimeGrid &grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t order() const noexcept { return grid_.size(); }
    [[nodiscard]] const std::vector<double> &outcome_values() const noexcept { return values_; }
    [[nodiscard]] const SequenceIndexer &indexer() const noexcept { return indexer_; }
    [[nodiscard]] std::size_t sequences() const noexcept { return indexer_.count(); }
    [[nodiscard]] Complex at(std::size_t plus, std::size_t minus) const {
        return amps_[plus * indexer_.count() + minus];
    }
    [[nodiscard]] Complex at(const OutcomeSequence &plus, const OutcomeSequence &minus) const {
        return at(indexer_.flat(plus), indexer_.flat(minus));
    }
    [[nodiscard]] const std::vector<Complex> &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] Complex total() const;
    [[nodiscard]] BornTable diagonal() const;

  private:
    TimeGrid grid_;
    std::vector<double> values_;
    SequenceIndexer indexer_;
    std::vector<Complex> amps_;
};

/// max |Q(f, g) - conj Q(g, f)|.
[[nodiscard]] double hermitian_asymmetry(const BiProbTable &table);
/// max |Q(f, g)| over pairs whose latest outcomes differ.
[[nodiscard]] double last_index_offdiagonality(const BiProbTable &table);

/// Sums the table over the outcome at `position` (0 = earliest time).
[[nodiscard]] BornTable marginalize(const BornTable &table, std::size_t position);
/// Sums the bi-table over the paired outcomes at `position`.
[[nodiscard]] BiProbTable marginalize(const BiProbTable &table, std::size_t position);

/// An observable measured projectively on a system whose unmeasured
/// evolution over an interval dt is a fixed linear map.
class ProcessModel {
  public:
    virtual ~ProcessModel() = default;

    [[nodiscard]] virtual const SpectralDecomposition &observable() const = 0;
    [[nodiscard]] virtual const DensityMatrix &initial_state() const = 0;
    /// Free evolution over an interval of length dt >= 0.
    [[nodiscard]] virtual Superoperator evolution(double dt) const = 0;

    [[nodiscard]] virtual BornTable born_distribution(const TimeGrid &grid,
                                                      const TableLimits &limits = {}) const;
    [[nodiscard]] virtual BiProbTable bi_probability(const TimeGrid &grid,
                                                     const TableLimits &limits = {}) const;
};

/// Tables via alternating projector sandwiches and evolution maps,
/// tr[P(f_n, g_n) E(t_n - t_{n-1}) ... P(f_1, g_1) E(t_1) rho].
[[nodiscard]] BornTable superoperator_born(const ProcessModel &model, const TimeGrid &grid,
                                           const TableLimits &limits = {});
[[nodiscard]] BiProbTable superoperator_bi_probability(const ProcessModel &model, const TimeGrid &grid,
                                                       const TableLimits &limits = {});

/// Hamiltonian, observable and initial state of a closed system.
class QuantumSystem {
  public:
    QuantumSystem(HermitianMatrix h, SpectralDecomposition f, DensityMatrix rho0);

    [[nodiscard]] const HermitianMatrix &hamiltonian() const noexcept { return h_; }
    [[nodiscard]] const SpectralDecomposition &observable() const noexcept { return f_; }
    [[nodiscard]] const DensityMatrix &initial_state() const noexcept { return rho_; }
    [[nodiscard]] const UnitaryGroup &group() const noexcept { return *group_; }
    [[nodiscard]] Index dim() const noexcept { return h_.dim(); }

  private:
    HermitianMatrix h_;
    SpectralDecomposition f_;
    DensityMatrix rho_;
    std::shared_ptr<const UnitaryGroup> group_;
};

/// Unitary dynamics; tables use Heisenberg-picture projectors.
class UnitaryProcess final : public ProcessModel {
  public:
    explicit UnitaryProcess(QuantumSystem sys) : sys_(std::move(sys)) {}

    [[nodiscard]] const QuantumSystem &system() const noexcept { return sys_; }
    [[nodiscard]] const SpectralDecomposition &observable() const override { return sys_.observable(); }
    [[nodiscard]] const DensityMatrix &initial_state() const override { return sys_.initial_state(); }
    [[nodiscard]] Superoperator evolution(double dt) const override;
    [[nodiscard]] BornTable born_distribution(const TimeGrid &grid,
                                              const TableLimits &limits = {}) const override;
    [[nodiscard]] BiProbTable bi_probability(const TimeGrid &grid,
                                             const TableLimits &limits = {}) const override;

  private:
    QuantumSystem sys_;
};

[[nodiscard]] BornTable born_distribution(const QuantumSystem &sys, const TimeGrid &grid,
                                          const TableLimits &limits = {});
[[nodiscard]] BiProbTable bi_probability(const QuantumSystem &sys, const TimeGrid &grid,
                                         const TableLimits &limits = {});

/// Density matrix at t_next conditioned on an outcome history measured on
/// `history_grid`. An empty history gives U(t_next) rho U^dagger(t_next).
[[nodiscard]] DensityMatrix conditional_state(const QuantumSystem &sys, const OutcomeSequence &history,
                                              const std::vector<double> &history_times, double t_next,
                                              double prob_floor = kProbFloor);

} // namespace qsurrogate
