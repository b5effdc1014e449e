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

#include "qsurrogate/sampler.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "qsurrogate/parallel.hpp"

namespace qsurrogate {

std::mt19937_64 trajectory_engine(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64 &engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double Trajectory::value_at(double t) const {
    if (!(t >= 0.0) || t > grid.back()) {
        std::ostringstream os;
        os << "time " << t << " outside trajectory span [0, " << grid.back() << "]";
        throw Error(ErrorCode::TimeOutOfRange, os.str());
    }
    const auto &times = grid.times();
    std::size_t k = 0;
    while (k + 1 < times.size() && times[k + 1] <= t) ++k;
    return values[k];
}

namespace {

/// Grid-fixed pieces of the collapse chain shared by all trajectories.
class CollapseChain {
  public:
    CollapseChain(const ProcessModel &model, const TimeGrid &grid)
        : sd_(model.observable()), rho0_(model.initial_state().matrix()), d_(sd_.dim()) {
        std::map<double, std::size_t> by_gap;
        double prev = 0.0;
        for (double t : grid.times()) {
            const double gap = t - prev;
            auto it = by_gap.find(gap);
            if (it == by_gap.end()) {
                it = by_gap.emplace(gap, maps_.size()).first;
                maps_.push_back(model.evolution(gap).matrix);
            }
            step_.push_back(it->second);
            prev = t;
        }
    }

    [[nodiscard]] std::vector<std::size_t> draw(std::mt19937_64 &engine) const {
        const std::size_t m = sd_.size();
        std::vector<std::size_t> picks;
        picks.reserve(step_.size());
        Matrix state = rho0_;
        std::vector<double> probs(m);
        for (std::size_t k = 0; k < step_.size(); ++k) {
            state = unvec(maps_[step_[k]] * vec(state), d_);
            double total = 0.0;
            for (std::size_t f = 0; f < m; ++f) {
                // Roundoff negatives are not drawable.
                probs[f] = std::max(0.0, (sd_[f].projector * state).trace().real());
                total += probs[f];
            }
            const double u = uniform01(engine) * total;
            std::size_t pick = m;
            double acc = 0.0;
            for (std::size_t f = 0; f < m; ++f) {
                if (probs[f] <= 0.0) continue;
                acc += probs[f];
                pick = f;
                if (u < acc) break;
            }
            if (pick == m) throw Error(ErrorCode::ZeroProbabilityHistory, "no outcome has positive probability");
            const Matrix &p = sd_[pick].projector;
            state = p * state * p / probs[pick];
            picks.push_back(pick);
        }
        return picks;
    }

  private:
    const SpectralDecomposition &sd_;
    Matrix rho0_;
    Index d_;
    std::vector<Matrix> maps_;
    std::vector<std::size_t> step_;
};

Trajectory make_trajectory(const TimeGrid &grid, const SpectralDecomposition &sd, std::vector<std::size_t> picks) {
    std::vector<double> values;
    values.reserve(picks.size());
    for (auto p : picks) values.push_back(sd[p].value);
    return {grid, std::move(picks), std::move(values)};
}

} // namespace

Trajectory sample_trajectory(const ProcessModel &model, const TimeGrid &grid, std::uint64_t seed,
                             std::uint64_t index) {
    const CollapseChain chain(model, grid);
    auto engine = trajectory_engine(seed, index);
    return make_trajectory(grid, model.observable(), chain.draw(engine));
}

Trajectory sample_trajectory(const QuantumSystem &sys, const TimeGrid &grid, std::uint64_t seed,
                             std::uint64_t index) {
    return sample_trajectory(UnitaryProcess(sys), grid, seed, index);
}

Ensemble sample_ensemble(const ProcessModel &model, const TimeGrid &grid, std::size_t count, std::uint64_t seed,
                         unsigned threads) {
    if (count == 0) throw Error(ErrorCode::InvalidArgument, "ensemble size must be at least 1");
    const CollapseChain chain(model, grid);
    std::vector<std::vector<std::size_t>> picks(count);
    parallel_for(count, threads, [&](std::size_t j) {
        auto engine = trajectory_engine(seed, j);
        picks[j] = chain.draw(engine);
    });
    Ensemble ens{grid, model.observable().values(), seed, {}};
    ens.trajectories.reserve(count);
    for (auto &p : picks) ens.trajectories.push_back(make_trajectory(grid, model.observable(), std::move(p)));
    return ens;
}

BornTable empirical_joint(const Ensemble &ens) {
    if (ens.trajectories.empty()) throw Error(ErrorCode::InvalidArgument, "empty ensemble");
    const SequenceIndexer index(ens.outcome_values.size(), ens.grid.size());
    std::vector<double> counts(index.count(), 0.0);
    for (const auto &tr : ens.trajectories) counts[index.flat(tr.indices)] += 1.0;
    const double n = static_cast<double>(ens.size());
    for (auto &c : counts) c /= n;
    return {ens.grid, ens.outcome_values, std::move(counts)};
}

Estimate autocorrelation_estimate(const Ensemble &ens, double t, double s) {
    if (ens.trajectories.empty()) throw Error(ErrorCode::InvalidArgument, "empty ensemble");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto &tr : ens.trajectories) {
        const double x = tr.value_at(t) * tr.value_at(s);
        sum += x;
        sum_sq += x * x;
    }
    const double n = static_cast<double>(ens.size());
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
    return {mean, std::sqrt(var / n)};
}

double autocorrelation(const Ensemble &ens, double t, double s) {
    return autocorrelation_estimate(ens, t, s).mean;
}

void write_csv(const Ensemble &ens, std::ostream &out) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    const auto &times = ens.grid.times();
    for (std::size_t i = 0; i < times.size(); ++i) os << (i ? "," : "") << times[i];
    os << "\n";
    for (const auto &tr : ens.trajectories) {
        for (std::size_t i = 0; i < tr.values.size(); ++i) os << (i ? "," : "") << tr.values[i];
        os << "\n";
    }
    out << os.str();
}

} // namespace qsurrogate
