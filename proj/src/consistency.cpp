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

#include "qsurrogate/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsurrogate/random_ops.hpp"

namespace qsurrogate {

std::string_view condition_name(Condition c) noexcept {
    switch (c) {
    case Condition::Causality: return "causality";
    case Condition::Kolmogorov: return "KC";
    case Condition::ConsistentMeasurements: return "CM";
    case Condition::CmRealForm: return "CM-real-form";
    case Condition::SurrogateField: return "SF";
    case Condition::BiConsistency: return "bi-consistency";
    case Condition::GeneralizedRelation: return "generalized-relation";
    }
    return "unknown";
}

bool ConsistencyReport::has(Condition c) const {
    return std::any_of(records.begin(), records.end(), [c](const auto &r) { return r.condition == c; });
}

const ConditionRecord &ConsistencyReport::get(Condition c) const {
    for (const auto &r : records) {
        if (r.condition == c) return r;
    }
    throw Error(ErrorCode::InvalidArgument, "report has no record for " + std::string(condition_name(c)));
}

void ConsistencyReport::append(const ConsistencyReport &other) {
    for (const auto &r : other.records) {
        if (!has(r.condition)) records.push_back(r);
    }
}

namespace {

/// Running maximum that keeps the first witness among near-ties, so that
/// reported witnesses do not depend on roundoff between equal magnitudes.
class MaxTracker {
  public:
    explicit MaxTracker(Condition c, double threshold) {
        record_.condition = c;
        record_.threshold = threshold;
    }

    template <class MakeWitness> void offer(double v, MakeWitness &&make) {
        if (!(v > record_.max_abs_violation)) return;
        const bool distinct = v > record_.max_abs_violation * (1.0 + 1e-9);
        record_.max_abs_violation = v;
        if (distinct || !record_.witness) record_.witness = make();
    }

    void cover(std::size_t position) { record_.positions.push_back(position); }

    ConditionRecord finish() {
        record_.passed = record_.max_abs_violation <= record_.threshold;
        if (record_.max_abs_violation == 0.0) record_.witness.reset();
        return record_;
    }

  private:
    ConditionRecord record_;
};

OutcomeSequence insert_at(const OutcomeSequence &reduced, std::size_t position, std::size_t value) {
    OutcomeSequence seq = reduced;
    seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(position), value);
    return seq;
}

void require_order_two(const TimeGrid &grid, const char *what) {
    if (grid.size() < 2) throw Error(ErrorCode::InvalidArgument, std::string(what) + " requires order >= 2");
}

} // namespace

ConsistencyReport check_kc(const ProcessModel &model, const TimeGrid &grid, double epsilon,
                           const TableLimits &limits) {
    require_order_two(grid, "KC check");
    const std::size_t n = grid.size();
    const BornTable full = model.born_distribution(grid, limits);
    MaxTracker kc(Condition::Kolmogorov, epsilon);
    MaxTracker causal(Condition::Causality, epsilon);
    for (std::size_t i = 0; i < n; ++i) {
        const BornTable summed = marginalize(full, i);
        const BornTable fresh = model.born_distribution(grid.without(i), limits);
        kc.cover(i);
        if (i == n - 1) causal.cover(i);
        for (std::size_t r = 0; r < fresh.size(); ++r) {
            const double v = std::abs(summed[r] - fresh[r]);
            auto witness = [&] { return Witness{i, fresh.indexer().sequence(r), {}}; };
            kc.offer(v, witness);
            if (i == n - 1) causal.offer(v, witness);
        }
    }
    return {grid, n, {causal.finish(), kc.finish()}};
}

ConsistencyReport check_kc(const QuantumSystem &sys, const TimeGrid &grid, double epsilon,
                           const TableLimits &limits) {
    return check_kc(UnitaryProcess(sys), grid, epsilon, limits);
}

ConsistencyReport check_cm(const BiProbTable &table, double epsilon) {
    const std::size_t n = table.order();
    const std::size_t m = table.indexer().num_outcomes();
    const SequenceIndexer reduced(m, n - 1);
    const SequenceIndexer &full = table.indexer();
    MaxTracker cm(Condition::ConsistentMeasurements, epsilon);
    MaxTracker form(Condition::CmRealForm, kCmFormAgreementTol);
    for (std::size_t i = 0; i < n; ++i) {
        cm.cover(i);
        form.cover(i);
        for (std::size_t r = 0; r < reduced.count(); ++r) {
            const OutcomeSequence rest = reduced.sequence(r);
            Complex sum = 0.0;
            double real_form = 0.0;
            for (std::size_t f = 0; f < m; ++f) {
                for (std::size_t g = 0; g < m; ++g) {
                    if (f == g) continue;
                    const Complex q = table.at(full.flat(insert_at(rest, i, f)), full.flat(insert_at(rest, i, g)));
                    sum += q;
                    if (f > g) real_form += 2.0 * q.real();
                }
            }
            auto witness = [&] { return Witness{i, rest, rest}; };
            cm.offer(std::abs(sum), witness);
            form.offer(std::abs(sum - Complex(real_form, 0.0)), witness);
        }
    }
    return {table.grid(), n, {cm.finish(), form.finish()}};
}

ConsistencyReport check_sf(const BiProbTable &table, double epsilon) {
    const std::size_t count = table.sequences();
    MaxTracker sf(Condition::SurrogateField, epsilon);
    for (std::size_t i = 0; i < table.order(); ++i) sf.cover(i);
    for (std::size_t f = 0; f < count; ++f) {
        for (std::size_t g = 0; g < f; ++g) {
            sf.offer(std::abs(table.at(f, g)), [&] {
                return Witness{std::nullopt, table.indexer().sequence(f), table.indexer().sequence(g)};
            });
        }
    }
    return {table.grid(), table.order(), {sf.finish()}};
}

ConsistencyReport check_bi_consistency(const ProcessModel &model, const TimeGrid &grid, double epsilon,
                                       const TableLimits &limits) {
    const std::size_t n = grid.size();
    const BiProbTable full = model.bi_probability(grid, limits);
    MaxTracker bc(Condition::BiConsistency, epsilon);
    if (n == 1) {
        // Marginalizing the only pair leaves tr(rho) = 1.
        bc.offer(std::abs(full.total() - Complex(1.0, 0.0)), [] { return Witness{std::size_t{0}, {}, {}}; });
        bc.cover(0);
        return {grid, n, {bc.finish()}};
    }
    for (std::size_t i = 0; i < n; ++i) {
        bc.cover(i);
        const BiProbTable summed = marginalize(full, i);
        const BiProbTable fresh = model.bi_probability(grid.without(i), limits);
        const std::size_t count = fresh.sequences();
        for (std::size_t f = 0; f < count; ++f) {
            for (std::size_t g = 0; g < count; ++g) {
                bc.offer(std::abs(summed.at(f, g) - fresh.at(f, g)), [&] {
                    return Witness{i, fresh.indexer().sequence(f), fresh.indexer().sequence(g)};
                });
            }
        }
    }
    return {grid, n, {bc.finish()}};
}

namespace {

ConditionRecord generalized_relation_record(const ProcessModel &model, const TimeGrid &grid,
                                            const BornTable &born, const BiProbTable &bi, double threshold,
                                            const TableLimits &limits) {
    const std::size_t n = grid.size();
    const std::size_t m = born.indexer().num_outcomes();
    const SequenceIndexer &full = born.indexer();
    MaxTracker rel(Condition::GeneralizedRelation, threshold);
    for (std::size_t i = 0; i < n; ++i) {
        rel.cover(i);
        const BornTable fresh = model.born_distribution(grid.without(i), limits);
        for (std::size_t r = 0; r < fresh.size(); ++r) {
            const OutcomeSequence rest = fresh.indexer().sequence(r);
            double born_sum = 0.0;
            Complex off_sum = 0.0;
            for (std::size_t f = 0; f < m; ++f) {
                const std::size_t ff = full.flat(insert_at(rest, i, f));
                born_sum += born[ff];
                for (std::size_t g = 0; g < m; ++g) {
                    if (g != f) off_sum += bi.at(ff, full.flat(insert_at(rest, i, g)));
                }
            }
            const Complex residual = Complex(fresh[r] - born_sum, 0.0) - off_sum;
            rel.offer(std::abs(residual), [&] { return Witness{i, rest, rest}; });
        }
    }
    return rel.finish();
}

} // namespace

double verify_generalized_relation(const ProcessModel &model, const TimeGrid &grid, const TableLimits &limits) {
    require_order_two(grid, "generalized relation");
    const BornTable born = model.born_distribution(grid, limits);
    const BiProbTable bi = model.bi_probability(grid, limits);
    return generalized_relation_record(model, grid, born, bi, 0.0, limits).max_abs_violation;
}

double verify_generalized_relation(const QuantumSystem &sys, const TimeGrid &grid, const TableLimits &limits) {
    return verify_generalized_relation(UnitaryProcess(sys), grid, limits);
}

ConsistencyReport analyze(const ProcessModel &model, const TimeGrid &grid, double epsilon,
                          const TableLimits &limits) {
    const std::size_t n = grid.size();
    const BiProbTable bi = model.bi_probability(grid, limits);
    ConsistencyReport report{grid, n, {}};
    if (n >= 2) {
        report.append(check_kc(model, grid, epsilon, limits));
    } else {
        // A single time has nothing to marginalize against.
        report.records.push_back({Condition::Causality, 0.0, std::nullopt, epsilon, true, {}});
        report.records.push_back({Condition::Kolmogorov, 0.0, std::nullopt, epsilon, true, {}});
    }
    report.append(check_cm(bi, epsilon));
    report.append(check_sf(bi, epsilon));
    report.append(check_bi_consistency(model, grid, epsilon, limits));
    if (n >= 2) {
        const BornTable born = model.born_distribution(grid, limits);
        report.records.push_back(generalized_relation_record(model, grid, born, bi, epsilon, limits));
    }
    return report;
}

std::optional<QuantumSystem> search_cm_without_sf(const CounterexampleSearch &params) {
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> time(0.05, 3.0);
    std::uniform_int_distribution<int> level(-1, 1);
    for (std::size_t trial = 0; trial < params.trials; ++trial) {
        RealVector spectrum(params.dim);
        do {
            for (Index k = 0; k < params.dim; ++k) spectrum(k) = level(rng);
        } while (spectrum.maxCoeff() == spectrum.minCoeff());
        std::vector<double> times(params.order);
        for (auto &t : times) t = time(rng);
        std::sort(times.begin(), times.end());
        if (std::adjacent_find(times.begin(), times.end()) != times.end()) continue;

        QuantumSystem sys(HermitianMatrix(random_hermitian(rng, params.dim)),
                          spectral_decompose(HermitianMatrix(random_with_spectrum(rng, spectrum))),
                          DensityMatrix(random_density(rng, params.dim)));
        const BiProbTable bi = bi_probability(sys, TimeGrid(times));
        if (check_cm(bi, params.epsilon).records.front().passed &&
            !check_sf(bi, params.epsilon).records.front().passed) {
            return sys;
        }
    }
    return std::nullopt;
}

} // namespace qsurrogate
