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

#include "qsurrogate/process.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace qsurrogate {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "time grid must contain at least one time");
    }
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i]) || !(times_[i] > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "grid times must be finite and positive");
        }
        if (i > 0 && !(times_[i] > times_[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "grid times must be strictly increasing");
        }
    }
}

TimeGrid TimeGrid::without(std::size_t position) const {
    if (position >= times_.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "grid position out of range");
    }
    if (times_.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "cannot remove the only time of a grid");
    }
    std::vector<double> t = times_;
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(position));
    return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::prefix(std::size_t n) const {
    if (n == 0 || n > times_.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "grid prefix length out of range");
    }
    return TimeGrid(std::vector<double>(times_.begin(), times_.begin() + static_cast<std::ptrdiff_t>(n)));
}

std::size_t table_size(std::size_t m, std::size_t k, std::size_t cap) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (count > cap / std::max<std::size_t>(m, 1)) {
            std::ostringstream os;
            os << m << "^" << k << " entries exceed the table cap of " << cap;
            throw Error(ErrorCode::TableTooLarge, os.str());
        }
        count *= m;
    }
    if (count > cap) {
        std::ostringstream os;
        os << m << "^" << k << " entries exceed the table cap of " << cap;
        throw Error(ErrorCode::TableTooLarge, os.str());
    }
    return count;
}

SequenceIndexer::SequenceIndexer(std::size_t num_outcomes, std::size_t length)
    : m_(num_outcomes), length_(length),
      count_(table_size(num_outcomes, length, std::numeric_limits<std::size_t>::max())) {
    if (m_ == 0) throw Error(ErrorCode::InvalidArgument, "indexer needs at least one outcome");
}

std::size_t SequenceIndexer::flat(const OutcomeSequence &seq) const {
    if (seq.size() != length_) {
        throw Error(ErrorCode::DimensionMismatch, "outcome sequence has wrong length");
    }
    std::size_t f = 0;
    for (std::size_t v : seq) {
        if (v >= m_) throw Error(ErrorCode::IndexOutOfRange, "outcome index out of range");
        f = f * m_ + v;
    }
    return f;
}

OutcomeSequence SequenceIndexer::sequence(std::size_t flat) const {
    if (flat >= count_) throw Error(ErrorCode::IndexOutOfRange, "flat sequence index out of range");
    OutcomeSequence seq(length_);
    for (std::size_t i = length_; i-- > 0;) {
        seq[i] = flat % m_;
        flat /= m_;
    }
    return seq;
}

BornTable::BornTable(TimeGrid grid, std::vector<double> outcome_values, std::vector<double> probs)
    : grid_(std::move(grid)), values_(std::move(outcome_values)), indexer_(values_.size(), grid_.size()),
      probs_(std::move(probs)) {
    if (probs_.size() != indexer_.count()) {
        throw Error(ErrorCode::DimensionMismatch, "Born table size does not match m^n");
    }
}

double BornTable::total() const {
    double s = 0.0;
    for (double p : probs_) s += p;
    return s;
}

BiProbTable::BiProbTable(TimeGrid grid, std::vector<double> outcome_values, std::vector<Complex> amps)
    : grid_(std::move(grid)), values_(std::move(outcome_values)), indexer_(values_.size(), grid_.size()),
      amps_(std::move(amps)) {
    if (amps_.size() != indexer_.count() * indexer_.count()) {
        throw Error(ErrorCode::DimensionMismatch, "bi-probability table size does not match m^(2n)");
    }
}

Complex BiProbTable::total() const {
    Complex s = 0.0;
    for (const auto &q : amps_) s += q;
    return s;
}

BornTable BiProbTable::diagonal() const {
    const std::size_t count = indexer_.count();
    std::vector<double> probs(count);
    for (std::size_t f = 0; f < count; ++f) probs[f] = at(f, f).real();
    return {grid_, values_, std::move(probs)};
}

double hermitian_asymmetry(const BiProbTable &table) {
    const std::size_t count = table.sequences();
    double worst = 0.0;
    for (std::size_t f = 0; f < count; ++f) {
        for (std::size_t g = f; g < count; ++g) {
            worst = std::max(worst, std::abs(table.at(f, g) - std::conj(table.at(g, f))));
        }
    }
    return worst;
}

double last_index_offdiagonality(const BiProbTable &table) {
    const std::size_t count = table.sequences();
    const std::size_t m = table.indexer().num_outcomes();
    double worst = 0.0;
    for (std::size_t f = 0; f < count; ++f) {
        for (std::size_t g = 0; g < count; ++g) {
            // The latest outcome is the least significant digit.
            if (f % m != g % m) worst = std::max(worst, std::abs(table.at(f, g)));
        }
    }
    return worst;
}

namespace {

void require_marginal_position(std::size_t order, std::size_t position) {
    if (order < 2) throw Error(ErrorCode::InvalidArgument, "marginalization requires order >= 2");
    if (position >= order) throw Error(ErrorCode::IndexOutOfRange, "marginalization position out of range");
}

OutcomeSequence drop(OutcomeSequence seq, std::size_t position) {
    seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(position));
    return seq;
}

} // namespace

BornTable marginalize(const BornTable &table, std::size_t position) {
    require_marginal_position(table.order(), position);
    TimeGrid reduced = table.grid().without(position);
    const SequenceIndexer out_index(table.outcome_values().size(), reduced.size());
    std::vector<double> probs(out_index.count(), 0.0);
    for (std::size_t f = 0; f < table.size(); ++f) {
        probs[out_index.flat(drop(table.indexer().sequence(f), position))] += table[f];
    }
    return {std::move(reduced), table.outcome_values(), std::move(probs)};
}

BiProbTable marginalize(const BiProbTable &table, std::size_t position) {
    require_marginal_position(table.order(), position);
    TimeGrid reduced = table.grid().without(position);
    const SequenceIndexer out_index(table.outcome_values().size(), reduced.size());
    const std::size_t count = table.sequences();
    std::vector<std::size_t> reduced_flat(count);
    for (std::size_t f = 0; f < count; ++f) {
        reduced_flat[f] = out_index.flat(drop(table.indexer().sequence(f), position));
    }
    std::vector<Complex> amps(out_index.count() * out_index.count(), 0.0);
    for (std::size_t f = 0; f < count; ++f) {
        for (std::size_t g = 0; g < count; ++g) {
            amps[reduced_flat[f] * out_index.count() + reduced_flat[g]] += table.at(f, g);
        }
    }
    return {std::move(reduced), table.outcome_values(), std::move(amps)};
}

// ---------------------------------------------------------------------------
// Superoperator route

namespace {

Complex vec_trace(const Vector &v, Index d) {
    Complex s = 0.0;
    for (Index i = 0; i < d; ++i) s += v(i + i * d);
    return s;
}

struct SuperoperatorChain {
    Index d;
    std::size_t m;
    std::vector<const Matrix *> steps;     // evolution for each grid step
    std::map<double, Matrix> cache;        // by gap
    std::vector<Matrix> pair_maps;         // sandwich(P(f), P(g)) at f * m + g

    SuperoperatorChain(const ProcessModel &model, const TimeGrid &grid)
        : d(model.observable().dim()), m(model.observable().size()) {
        const auto &sd = model.observable();
        pair_maps.reserve(m * m);
        for (std::size_t f = 0; f < m; ++f) {
            for (std::size_t g = 0; g < m; ++g) {
                pair_maps.push_back(sandwich_superop(sd[f].projector, sd[g].projector).matrix);
            }
        }
        double prev = 0.0;
        for (double t : grid.times()) {
            const double gap = t - prev;
            auto it = cache.find(gap);
            if (it == cache.end()) it = cache.emplace(gap, model.evolution(gap).matrix).first;
            prev = t;
        }
        prev = 0.0;
        for (double t : grid.times()) {
            steps.push_back(&cache.at(t - prev));
            prev = t;
        }
    }
};

void check_model_dims(const ProcessModel &model) {
    if (model.initial_state().dim() != model.observable().dim()) {
        throw Error(ErrorCode::DimensionMismatch, "initial state and observable dimensions differ");
    }
}

} // namespace

BornTable superoperator_born(const ProcessModel &model, const TimeGrid &grid, const TableLimits &limits) {
    check_model_dims(model);
    const std::size_t n = grid.size();
    const std::size_t m = model.observable().size();
    const std::size_t count = table_size(m, n, limits.max_entries);
    const SuperoperatorChain chain(model, grid);
    std::vector<double> probs(count, 0.0);

    std::function<void(std::size_t, const Vector &, std::size_t)> descend =
        [&](std::size_t k, const Vector &v, std::size_t flat) {
            if (k == n) {
                probs[flat] = vec_trace(v, chain.d).real();
                return;
            }
            const Vector w = *chain.steps[k] * v;
            for (std::size_t f = 0; f < m; ++f) {
                descend(k + 1, chain.pair_maps[f * m + f] * w, flat * m + f);
            }
        };
    descend(0, vec(model.initial_state().matrix()), 0);
    return {grid, model.observable().values(), std::move(probs)};
}

BiProbTable superoperator_bi_probability(const ProcessModel &model, const TimeGrid &grid,
                                         const TableLimits &limits) {
    check_model_dims(model);
    const std::size_t n = grid.size();
    const std::size_t m = model.observable().size();
    (void)table_size(m, 2 * n, limits.max_entries);
    const std::size_t count = table_size(m, n, limits.max_entries);
    const SuperoperatorChain chain(model, grid);
    std::vector<Complex> amps(count * count, 0.0);

    std::function<void(std::size_t, const Vector &, std::size_t, std::size_t)> descend =
        [&](std::size_t k, const Vector &v, std::size_t plus, std::size_t minus) {
            if (k == n) {
                amps[plus * count + minus] = vec_trace(v, chain.d);
                return;
            }
            const Vector w = *chain.steps[k] * v;
            for (std::size_t f = 0; f < m; ++f) {
                for (std::size_t g = 0; g < m; ++g) {
                    descend(k + 1, chain.pair_maps[f * m + g] * w, plus * m + f, minus * m + g);
                }
            }
        };
    descend(0, vec(model.initial_state().matrix()), 0, 0);
    return {grid, model.observable().values(), std::move(amps)};
}

BornTable ProcessModel::born_distribution(const TimeGrid &grid, const TableLimits &limits) const {
    return superoperator_born(*this, grid, limits);
}

BiProbTable ProcessModel::bi_probability(const TimeGrid &grid, const TableLimits &limits) const {
    return superoperator_bi_probability(*this, grid, limits);
}

// ---------------------------------------------------------------------------
// Heisenberg-picture route

QuantumSystem::QuantumSystem(HermitianMatrix h, SpectralDecomposition f, DensityMatrix rho0)
    : h_(std::move(h)), f_(std::move(f)), rho_(std::move(rho0)) {
    if (h_.dim() != f_.dim() || h_.dim() != rho_.dim()) {
        std::ostringstream os;
        os << "system dimensions disagree: H " << h_.dim() << ", F " << f_.dim() << ", rho " << rho_.dim();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    group_ = std::make_shared<const UnitaryGroup>(h_);
}

namespace {

/// tr(x y^dagger).
Complex frobenius(const Matrix &x, const Matrix &y) {
    return x.cwiseProduct(y.conjugate()).sum();
}

/// A_f = P(f_n, t_n) ... P(f_1, t_1) for every sequence, in indexer order.
std::vector<Matrix> projector_chains(const QuantumSystem &sys, const TimeGrid &grid) {
    const auto &sd = sys.observable();
    const std::size_t m = sd.size();
    std::vector<Matrix> chains{Matrix::Identity(sys.dim(), sys.dim())};
    for (double t : grid.times()) {
        const auto proj = heisenberg_projectors(sd, sys.group(), t);
        std::vector<Matrix> next;
        next.reserve(chains.size() * m);
        for (const auto &a : chains) {
            for (std::size_t f = 0; f < m; ++f) next.push_back(proj[f] * a);
        }
        chains = std::move(next);
    }
    return chains;
}

} // namespace

BornTable born_distribution(const QuantumSystem &sys, const TimeGrid &grid, const TableLimits &limits) {
    (void)table_size(sys.observable().size(), grid.size(), limits.max_entries);
    const auto chains = projector_chains(sys, grid);
    const Matrix &rho = sys.initial_state().matrix();
    std::vector<double> probs(chains.size());
    for (std::size_t f = 0; f < chains.size(); ++f) {
        probs[f] = frobenius(chains[f] * rho, chains[f]).real();
    }
    return {grid, sys.observable().values(), std::move(probs)};
}

BiProbTable bi_probability(const QuantumSystem &sys, const TimeGrid &grid, const TableLimits &limits) {
    (void)table_size(sys.observable().size(), 2 * grid.size(), limits.max_entries);
    const auto chains = projector_chains(sys, grid);
    const Matrix &rho = sys.initial_state().matrix();
    const std::size_t count = chains.size();
    std::vector<Complex> amps(count * count);
    for (std::size_t f = 0; f < count; ++f) {
        const Matrix left = chains[f] * rho;
        for (std::size_t g = 0; g < count; ++g) {
            amps[f * count + g] = frobenius(left, chains[g]);
        }
    }
    return {grid, sys.observable().values(), std::move(amps)};
}

Superoperator UnitaryProcess::evolution(double dt) const {
    return unitary_superop(sys_.group().at(dt));
}

BornTable UnitaryProcess::born_distribution(const TimeGrid &grid, const TableLimits &limits) const {
    return qsurrogate::born_distribution(sys_, grid, limits);
}

BiProbTable UnitaryProcess::bi_probability(const TimeGrid &grid, const TableLimits &limits) const {
    return qsurrogate::bi_probability(sys_, grid, limits);
}

DensityMatrix conditional_state(const QuantumSystem &sys, const OutcomeSequence &history,
                                const std::vector<double> &history_times, double t_next, double prob_floor) {
    if (history.size() != history_times.size()) {
        throw Error(ErrorCode::DimensionMismatch, "history outcomes and times differ in length");
    }
    if (!history_times.empty()) {
        TimeGrid check(history_times);
        if (!(t_next > check.back())) {
            throw Error(ErrorCode::InvalidArgument, "t_next must follow the last history time");
        }
    }
    const auto &sd = sys.observable();
    Matrix a = Matrix::Identity(sys.dim(), sys.dim());
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (history[i] >= sd.size()) throw Error(ErrorCode::IndexOutOfRange, "history outcome out of range");
        a = heisenberg_projectors(sd, sys.group(), history_times[i])[history[i]] * a;
    }
    const Matrix collapsed = a * sys.initial_state().matrix() * a.adjoint();
    const double p = collapsed.trace().real();
    if (!(p > prob_floor)) {
        std::ostringstream os;
        os << "history probability " << p << " is not above the floor " << prob_floor;
        throw Error(ErrorCode::ZeroProbabilityHistory, os.str());
    }
    const Matrix u = sys.group().at(t_next);
    return DensityMatrix(u * collapsed * u.adjoint() / p);
}

} // namespace qsurrogate
