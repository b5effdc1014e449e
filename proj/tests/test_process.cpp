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
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "qsurrogate/error.hpp"
#include "scenarios.hpp"

using namespace qsurrogate;

TEST(TimeGrid, validation) {
    EXPECT_THROW(TimeGrid({}), Error);
    EXPECT_THROW(TimeGrid({0.0, 1.0}), Error);
    EXPECT_THROW(TimeGrid({1.0, 1.0}), Error);
    EXPECT_THROW(TimeGrid({2.0, 1.0}), Error);
    EXPECT_THROW(TimeGrid({1.0, INFINITY}), Error);
    const TimeGrid g({1.0, 2.0, 3.0});
    EXPECT_EQ(g.without(1).times(), (std::vector<double>{1.0, 3.0}));
    EXPECT_EQ(g.prefix(2).times(), (std::vector<double>{1.0, 2.0}));
}

TEST(SequenceIndexer, earliest_time_is_most_significant) {
    const SequenceIndexer idx(3, 2);
    EXPECT_EQ(idx.count(), 9u);
    EXPECT_EQ(idx.flat({1, 2}), 5u);
    EXPECT_EQ(idx.sequence(7), (OutcomeSequence{2, 1}));
    EXPECT_THROW((void)idx.flat({3, 0}), Error);
}

TEST(TableSize, cap) {
    EXPECT_EQ(table_size(4, 3, 100), 64u);
    try {
        (void)table_size(10, 7, 1'000'000);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::TableTooLarge);
    }
    const auto sys = scenario::rabi();
    EXPECT_THROW((void)bi_probability(sys, TimeGrid({1, 2, 3}), TableLimits{32}), Error);
    EXPECT_NO_THROW((void)born_distribution(sys, TimeGrid({1, 2, 3}), TableLimits{32}));
}

TEST(BornDistribution, frozen_spin) {
    const QuantumSystem sys(HermitianMatrix(Matrix::Zero(2, 2)), spectral_decompose(HermitianMatrix(oracle::pauli_z())),
                            DensityMatrix(oracle::ket_projector(0)));
    const auto p = born_distribution(sys, TimeGrid({0.5, 1.0, 4.0}));
    for (std::size_t f = 0; f < p.size(); ++f) EXPECT_NEAR(p[f], f == p.size() - 1 ? 1.0 : 0.0, 1e-15);
}

TEST(BornDistribution, quasi_static_reduction) {
    std::mt19937_64 rng(41);
    const Matrix f = scenario::random_observable(rng, 4, 2);
    const auto sd = spectral_decompose(HermitianMatrix(f));
    Matrix h = Matrix::Zero(4, 4);
    for (const auto &o : sd.outcomes()) h += o.projector * random_hermitian(rng, 4) * o.projector;
    const DensityMatrix rho(random_density(rng, 4));
    const QuantumSystem sys(HermitianMatrix(0.5 * (h + h.adjoint())), sd, rho);
    const TimeGrid grid({0.3, 1.1, 2.0});
    const auto p = born_distribution(sys, grid);
    for (std::size_t flat = 0; flat < p.size(); ++flat) {
        const auto seq = p.indexer().sequence(flat);
        const bool constant = seq[0] == seq[1] && seq[1] == seq[2];
        const double expected = constant ? (sd[seq[2]].projector * rho.matrix()).trace().real() : 0.0;
        EXPECT_NEAR(p[flat], expected, 1e-12);
    }
    const auto q = bi_probability(sys, grid);
    for (std::size_t a = 0; a < q.sequences(); ++a)
        for (std::size_t b = 0; b < q.sequences(); ++b) {
            const Complex expected = a == b ? Complex(p[a]) : Complex(0.0);
            EXPECT_LT(std::abs(q.at(a, b) - expected), 1e-12);
        }
}

TEST(BornDistribution, rabi_single_time) {
    const double omega = 1.7;
    const auto sys = scenario::rabi(omega);
    for (double t : {0.1, 0.9, 2.5}) {
        const auto p = born_distribution(sys, TimeGrid({t}));
        EXPECT_NEAR(p.at({1}), std::pow(std::cos(omega * t / 2), 2), 1e-12);
        EXPECT_NEAR(p.total(), 1.0, 1e-12);
    }
}

TEST(BiProbability, matches_brute_force_oracle) {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 10; ++rep) {
        const auto sys = scenario::random_system(rng, 3, 2 + rep % 2);
        const TimeGrid grid = scenario::random_grid(rng, 2 + rep % 2);
        const auto q = bi_probability(sys, grid);
        const auto ref = oracle::biprob(sys.hamiltonian().matrix(), scenario::projectors(sys),
                                        sys.initial_state().matrix(), grid.times());
        ASSERT_EQ(q.amplitudes().size(), ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_LT(std::abs(q.amplitudes()[i] - ref[i]), 1e-10);
        const auto p = born_distribution(sys, grid);
        const auto pref = oracle::born(sys.hamiltonian().matrix(), scenario::projectors(sys),
                                       sys.initial_state().matrix(), grid.times());
        for (std::size_t i = 0; i < pref.size(); ++i) EXPECT_NEAR(p[i], pref[i], 1e-10);
    }
}

TEST(BiProbability, single_time_is_diagonal) {
    std::mt19937_64 rng(44);
    const auto sys = scenario::random_system(rng, 4, 3);
    const auto q = bi_probability(sys, TimeGrid({0.6}));
    const auto p = born_distribution(sys, TimeGrid({0.6}));
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) EXPECT_LT(std::abs(q.at(a, b) - (a == b ? p[a] : 0.0)), 1e-12);
}

TEST(BiProbability, rabi_off_diagonal_entries) {
    const auto q = bi_probability(scenario::rabi(), scenario::rabi_grid());
    // Outcome index 0 is -1, index 1 is +1. theta = Omega t / 2 = pi / 8.
    const double c2s2 = std::pow(std::cos(M_PI / 8) * std::sin(M_PI / 8), 2);
    EXPECT_NEAR(c2s2, 0.125, 1e-15);
    EXPECT_LT(std::abs(q.at({1, 1}, {0, 1}) - (-c2s2)), 1e-12);
    EXPECT_LT(std::abs(q.at({0, 0}, {1, 0}) - c2s2), 1e-12);
    double largest = 0.0;
    for (std::size_t f1 = 0; f1 < 2; ++f1)
        for (std::size_t f2 = 0; f2 < 2; ++f2) largest = std::max(largest, std::abs(q.at({f1, f2}, {1 - f1, f2})));
    EXPECT_GT(largest, 0.01);
}

TEST(BiProbability, diagonal_equals_born_bitwise) {
    std::mt19937_64 rng(45);
    const auto sys = scenario::random_system(rng, 4, 3);
    const TimeGrid grid({0.2, 0.7, 1.9});
    const auto q = bi_probability(sys, grid);
    const auto p = born_distribution(sys, grid);
    const auto d = q.diagonal();
    for (std::size_t f = 0; f < p.size(); ++f) EXPECT_EQ(d[f], p[f]);
    const UnitaryProcess proc(sys);
    const auto qs = superoperator_bi_probability(proc, grid);
    const auto ps = superoperator_born(proc, grid);
    for (std::size_t f = 0; f < p.size(); ++f) {
        EXPECT_EQ(qs.diagonal()[f], ps[f]);
        EXPECT_NEAR(ps[f], p[f], 1e-12);
    }
}

TEST(BiProbability, table_invariants) {
    std::mt19937_64 rng(46);
    for (int rep = 0; rep < 10; ++rep) {
        const auto sys = scenario::random_system(rng, 2 + rep % 4, 2);
        const auto q = bi_probability(sys, scenario::random_grid(rng, 3));
        EXPECT_LT(std::abs(q.total() - 1.0), 1e-10);
        EXPECT_LT(hermitian_asymmetry(q), 1e-12);
        EXPECT_LT(last_index_offdiagonality(q), 1e-12);
    }
}

TEST(Marginalize, deterministic_and_out_of_range) {
    const BornTable t(TimeGrid({1.0, 2.0}), {-1.0, 1.0}, {0.0, 0.0, 1.0, 0.0});
    const auto m = marginalize(t, 1);
    EXPECT_EQ(m.probabilities(), (std::vector<double>{0.0, 1.0}));
    EXPECT_EQ(m.grid().times(), (std::vector<double>{1.0}));
    try {
        (void)marginalize(t, 2);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
    EXPECT_THROW((void)marginalize(m, 0), Error);
}

TEST(Marginalize, last_index_reproduces_lower_order) {
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 10; ++rep) {
        const auto sys = scenario::random_system(rng, 3, 3);
        const TimeGrid grid = scenario::random_grid(rng, 3);
        const auto m = marginalize(born_distribution(sys, grid), 2);
        const auto p = born_distribution(sys, grid.prefix(2));
        for (std::size_t f = 0; f < p.size(); ++f) EXPECT_NEAR(m[f], p[f], 1e-12);
    }
}

TEST(Marginalize, rabi_first_index_differs_from_fresh_table) {
    const auto sys = scenario::rabi();
    const auto p2 = born_distribution(sys, scenario::rabi_grid());
    const auto m = marginalize(p2, 0);
    const auto p1 = born_distribution(sys, TimeGrid({2 * scenario::kRabiT}));
    EXPECT_NEAR(p1.at({1}), 0.5, 1e-12);
    EXPECT_NEAR(m.at({1}), 0.75, 1e-12);
    EXPECT_NEAR(m.at({1}) - p1.at({1}), 0.25, 1e-12);
}

TEST(ConditionalState, empty_history_and_rabi_step) {
    const auto sys = scenario::rabi(1.3);
    const DensityMatrix s = conditional_state(sys, {}, {}, 0.8);
    const Matrix u = oracle::rabi_unitary(1.3, 0.8);
    EXPECT_LT(max_abs(s.matrix() - u * oracle::ket_projector(0) * u.adjoint()), 1e-12);
    const double t1 = 0.5, t2 = 1.4;
    const DensityMatrix c = conditional_state(sys, {1}, {t1}, t2);
    EXPECT_NEAR(c.matrix()(0, 0).real(), std::pow(std::cos(1.3 * (t2 - t1) / 2), 2), 1e-12);
}

TEST(ConditionalState, quasi_static_stays_in_sector) {
    const auto sys = scenario::quasi_static();
    const DensityMatrix c = conditional_state(sys, {0}, {0.5}, 3.0);
    EXPECT_NEAR(c.matrix()(1, 1).real(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(c.matrix()(0, 1)), 0.0, 1e-12);
}

TEST(ConditionalState, refuses_null_history) {
    const QuantumSystem sys(HermitianMatrix(Matrix::Zero(2, 2)), spectral_decompose(HermitianMatrix(oracle::pauli_z())),
                            DensityMatrix(oracle::ket_projector(0)));
    try {
        (void)conditional_state(sys, {0}, {1.0}, 2.0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroProbabilityHistory);
    }
}

TEST(ConditionalState, chain_rule) {
    std::mt19937_64 rng(48);
    for (int rep = 0; rep < 5; ++rep) {
        const auto sys = scenario::random_system(rng, 3, 3);
        const TimeGrid grid = scenario::random_grid(rng, 3);
        const auto p = born_distribution(sys, grid);
        for (std::size_t flat = 0; flat < p.size(); ++flat) {
            if (p[flat] <= 1e-6) continue;
            const auto seq = p.indexer().sequence(flat);
            double product = 1.0;
            for (std::size_t k = 0; k < seq.size(); ++k) {
                const OutcomeSequence hist(seq.begin(), seq.begin() + static_cast<long>(k));
                const std::vector<double> times(grid.times().begin(), grid.times().begin() + static_cast<long>(k));
                const DensityMatrix c = conditional_state(sys, hist, times, grid[k]);
                product *= (sys.observable()[seq[k]].projector * c.matrix()).trace().real();
            }
            EXPECT_NEAR(product, p[flat], 1e-10);
        }
    }
}
