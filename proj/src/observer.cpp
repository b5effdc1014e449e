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

#include "qsurrogate/observer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qsurrogate/parallel.hpp"

namespace qsurrogate {

ObserverSystem::ObserverSystem(HermitianMatrix h, HermitianMatrix g, DensityMatrix rho, double coupling)
    : h_o(std::move(h)), g_o(std::move(g)), rho_o(std::move(rho)), lambda(coupling) {
    if (h_o.dim() != g_o.dim() || h_o.dim() != rho_o.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "observer H_o, G_o and rho_o dimensions differ");
    }
    if (!std::isfinite(lambda)) throw Error(ErrorCode::NonFinite, "coupling strength is not finite");
}

namespace {

HermitianMatrix build_joint_hamiltonian(const ObserverSystem &obs, const QuantumSystem &sys) {
    const Index d_o = obs.dim();
    const Index d_s = sys.dim();
    const Matrix id_o = Matrix::Identity(d_o, d_o);
    const Matrix id_s = Matrix::Identity(d_s, d_s);
    Matrix h = kron(obs.h_o.matrix(), id_s) + kron(id_o, sys.hamiltonian().matrix()) +
               obs.lambda * kron(obs.g_o.matrix(), sys.observable().reconstruct());
    return HermitianMatrix(0.5 * (h + h.adjoint()));
}

Index checked_joint_dim(const ObserverSystem &obs, const QuantumSystem &sys, Index cap) {
    const Index d = obs.dim() * sys.dim();
    if (d > cap) {
        std::ostringstream os;
        os << "joint dimension " << d << " exceeds the cap of " << cap;
        throw Error(ErrorCode::DimensionCap, os.str());
    }
    return d;
}

} // namespace

JointScenario::JointScenario(ObserverSystem obs, QuantumSystem sys, Index max_joint_dim)
    : obs_((checked_joint_dim(obs, sys, max_joint_dim), std::move(obs))), sys_(std::move(sys)),
      h_os_(build_joint_hamiltonian(obs_, sys_)),
      rho_os_(kron(obs_.rho_o.matrix(), sys_.initial_state().matrix())),
      group_(std::make_shared<const UnitaryGroup>(h_os_)) {}

DensityMatrix joint_propagate(const JointScenario &js, double t) {
    const Matrix u = js.joint_group().at(t);
    return DensityMatrix(u * js.joint_initial_state().matrix() * u.adjoint());
}

DensityMatrix exact_reduced_state(const JointScenario &js, double t) {
    const Matrix reduced = partial_trace(joint_propagate(js, t).matrix(), Subsystem::Second,
                                         {js.observer().dim(), js.system().dim()});
    const Matrix u_o = propagator(js.observer().h_o, t);
    return DensityMatrix(u_o.adjoint() * reduced * u_o);
}

DensityMatrix exact_reduced_state_interaction(const JointScenario &js, double t) {
    const Matrix free = kron(propagator(js.observer().h_o, t), js.system().group().at(t));
    const Matrix v = free.adjoint() * js.joint_group().at(t);
    const Matrix evolved = v * js.joint_initial_state().matrix() * v.adjoint();
    return DensityMatrix(partial_trace(evolved, Subsystem::Second, {js.observer().dim(), js.system().dim()}));
}

SurrogateDriver::SurrogateDriver(const ObserverSystem &obs, const std::vector<double> &outcome_values)
    : obs_(obs), values_(outcome_values), free_(obs.h_o) {
    groups_.reserve(values_.size());
    for (double f : values_) {
        const Matrix h = obs.h_o.matrix() + obs.lambda * f * obs.g_o.matrix();
        groups_.emplace_back(HermitianMatrix(0.5 * (h + h.adjoint())));
    }
}

Matrix SurrogateDriver::propagator(const Trajectory &traj, double from, double to) const {
    const auto &times = traj.grid.times();
    if (!(from >= 0.0) || !(to >= from) || to > times.back()) {
        std::ostringstream os;
        os << "surrogate interval [" << from << ", " << to << "] outside [0, " << times.back() << "]";
        throw Error(ErrorCode::TimeOutOfRange, os.str());
    }
    const Index d = obs_.dim();
    Matrix u = Matrix::Identity(d, d);
    double cur = from;
    // Segment k carries f(t_{k+1}) on [t_{k+1}, t_{k+2}); segment 0 starts at 0.
    std::size_t k = 0;
    while (k + 1 < times.size() && times[k + 1] <= cur) ++k;
    while (cur < to) {
        const double seg_end = k + 1 < times.size() ? times[k + 1] : std::numeric_limits<double>::infinity();
        const double end = std::min(to, seg_end);
        const std::size_t idx = traj.indices.at(k);
        if (idx >= groups_.size()) throw Error(ErrorCode::IndexOutOfRange, "trajectory outcome index out of range");
        u = groups_[idx].at(end - cur) * u;
        cur = end;
        ++k;
    }
    return u;
}

Matrix SurrogateDriver::state(const Trajectory &traj, double t) const {
    const Matrix w = propagator(traj, 0.0, t);
    const Matrix u_o = free_.at(t);
    const Matrix frame = u_o.adjoint() * w;
    return frame * obs_.rho_o.matrix() * frame.adjoint();
}

DensityMatrix surrogate_propagate(const ObserverSystem &obs, const Trajectory &traj, double t) {
    std::vector<double> values(traj.values.size());
    // Index the driver by trajectory position so any outcome labelling works.
    Trajectory local = traj;
    for (std::size_t i = 0; i < traj.values.size(); ++i) {
        values[i] = traj.values[i];
        local.indices[i] = i;
    }
    const SurrogateDriver driver(obs, values);
    return DensityMatrix(driver.state(local, t));
}

SurrogateAverage surrogate_average(const ObserverSystem &obs, const Ensemble &ens, double t, unsigned threads) {
    if (ens.trajectories.empty()) throw Error(ErrorCode::InvalidArgument, "empty ensemble");
    const SurrogateDriver driver(obs, ens.outcome_values);
    const std::size_t count = ens.size();
    std::vector<Matrix> states(count);
    parallel_for(count, threads, [&](std::size_t j) { states[j] = driver.state(ens.trajectories[j], t); });

    const Index d = obs.dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto &s : states) sum += s;
    const double n = static_cast<double>(count);
    const Matrix mean = sum / n;
    RealMatrix var_re = RealMatrix::Zero(d, d);
    RealMatrix var_im = RealMatrix::Zero(d, d);
    for (const auto &s : states) {
        const Matrix dev = s - mean;
        var_re += dev.real().cwiseAbs2();
        var_im += dev.imag().cwiseAbs2();
    }
    const double denom = count > 1 ? (n - 1.0) * n : 1.0;
    return {DensityMatrix(mean), (var_re / denom).cwiseSqrt(), (var_im / denom).cwiseSqrt(), count};
}

Comparison compare(const DensityMatrix &exact, const DensityMatrix &mc) {
    if (exact.dim() != mc.dim()) throw Error(ErrorCode::DimensionMismatch, "compared states differ in dimension");
    return {trace_distance(exact, mc), {}, {}, 0.0};
}

namespace {

constexpr double kZeroDiffTol = 1e-12;

// Differences at roundoff level count as agreement even when the sample
// spread is itself roundoff.
double z_score(double diff, double se) {
    if (std::abs(diff) <= kZeroDiffTol) return 0.0;
    if (se > 0.0) return diff / se;
    return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

} // namespace

Comparison compare(const DensityMatrix &exact, const SurrogateAverage &mc) {
    Comparison c = compare(exact, mc.mean);
    const Index d = exact.dim();
    c.z_re.resize(d, d);
    c.z_im.resize(d, d);
    const Matrix diff = exact.matrix() - mc.mean.matrix();
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            c.z_re(i, j) = z_score(diff(i, j).real(), mc.std_error_re(i, j));
            c.z_im(i, j) = z_score(diff(i, j).imag(), mc.std_error_im(i, j));
            c.max_abs_z = std::max({c.max_abs_z, std::abs(c.z_re(i, j)), std::abs(c.z_im(i, j))});
        }
    }
    return c;
}

BiProbTable observer_observable_biprob(const JointScenario &js, const SpectralDecomposition &x_o,
                                       const TimeGrid &grid, const TableLimits &limits) {
    if (x_o.dim() != js.observer().dim()) {
        throw Error(ErrorCode::DimensionMismatch, "observer observable does not act on the observer space");
    }
    const QuantumSystem joint(js.joint_hamiltonian(), x_o.tensor_identity(js.system().dim()),
                              js.joint_initial_state());
    return bi_probability(joint, grid, limits);
}

BornEstimate surrogate_observer_born(const ObserverSystem &obs, const SpectralDecomposition &x_o,
                                     const Ensemble &ens, const TimeGrid &grid, unsigned threads) {
    if (x_o.dim() != obs.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "observer observable does not act on the observer space");
    }
    if (ens.trajectories.empty()) throw Error(ErrorCode::InvalidArgument, "empty ensemble");
    if (grid.back() > ens.grid.back()) {
        throw Error(ErrorCode::TimeOutOfRange, "observer grid extends past the trajectory grid");
    }
    const SurrogateDriver driver(obs, ens.outcome_values);
    const std::size_t m = x_o.size();
    const SequenceIndexer index(m, grid.size());
    const Index d = obs.dim();
    const std::size_t count = ens.size();

    std::vector<std::vector<double>> per_traj(count);
    parallel_for(count, threads, [&](std::size_t j) {
        const auto &traj = ens.trajectories[j];
        std::vector<Matrix> chains{Matrix::Identity(d, d)};
        double prev = 0.0;
        for (double t : grid.times()) {
            const Matrix step = driver.propagator(traj, prev, t);
            std::vector<Matrix> next;
            next.reserve(chains.size() * m);
            for (const auto &a : chains) {
                const Matrix moved = step * a;
                for (std::size_t x = 0; x < m; ++x) next.push_back(x_o[x].projector * moved);
            }
            chains = std::move(next);
            prev = t;
        }
        auto &probs = per_traj[j];
        probs.resize(chains.size());
        for (std::size_t f = 0; f < chains.size(); ++f) {
            probs[f] = (chains[f] * obs.rho_o.matrix() * chains[f].adjoint()).trace().real();
        }
    });

    std::vector<double> mean(index.count(), 0.0);
    std::vector<double> sq(index.count(), 0.0);
    for (const auto &probs : per_traj) {
        for (std::size_t f = 0; f < probs.size(); ++f) mean[f] += probs[f];
    }
    const double n = static_cast<double>(count);
    for (auto &v : mean) v /= n;
    for (const auto &probs : per_traj) {
        for (std::size_t f = 0; f < probs.size(); ++f) sq[f] += (probs[f] - mean[f]) * (probs[f] - mean[f]);
    }
    std::vector<double> se(index.count(), 0.0);
    if (count > 1) {
        for (std::size_t f = 0; f < se.size(); ++f) se[f] = std::sqrt(sq[f] / ((n - 1.0) * n));
    }
    return {BornTable(grid, x_o.values(), std::move(mean)), std::move(se)};
}

} // namespace qsurrogate
