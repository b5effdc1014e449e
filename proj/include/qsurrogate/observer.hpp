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
 * A quantum observer O coupled to the measured system S through
 * H_os = H_o x 1 + 1 x H + lambda G_o x F.
 *
 * Exact reduced dynamics come from the full joint exponential. Surrogate
 * dynamics replace F by a sampled trajectory f(t), giving the stochastic
 * Hamiltonian H_o + lambda f(t) G_o, which is piecewise constant and hence
 * an exact finite product of exponentials. Observer states are returned in
 * the interaction picture with respect to H_o.
 */

#include <vector>

#include "qsurrogate/process.hpp"
#include "qsurrogate/sampler.hpp"

namespace qsurrogate {

inline constexpr Index kDefaultJointDimCap = 32;

struct ObserverSystem {
    HermitianMatrix h_o;
    HermitianMatrix g_o;
    DensityMatrix rho_o;
    double lambda;

    ObserverSystem(HermitianMatrix h, HermitianMatrix g, DensityMatrix rho, double coupling);
    [[nodiscard]] Index dim() const noexcept { return h_o.dim(); }
};

class JointScenario {
  public:
    JointScenario(ObserverSystem obs, QuantumSystem sys, Index max_joint_dim = kDefaultJointDimCap);

    [[nodiscard]] const ObserverSystem &observer() const noexcept { return obs_; }
    [[nodiscard]] const QuantumSystem &system() const noexcept { return sys_; }
    [[nodiscard]] Index joint_dim() const noexcept { return obs_.dim() * sys_.dim(); }
    [[nodiscard]] const HermitianMatrix &joint_hamiltonian() const noexcept { return h_os_; }
    [[nodiscard]] const DensityMatrix &joint_initial_state() const noexcept { return rho_os_; }
    [[nodiscard]] const UnitaryGroup &joint_group() const noexcept { return *group_; }

  private:
    ObserverSystem obs_;
    QuantumSystem sys_;
    HermitianMatrix h_os_;
    DensityMatrix rho_os_;
    std::shared_ptr<const UnitaryGroup> group_;
};

/// exp(-itH_os) (rho_o x rho) exp(itH_os).
[[nodiscard]] DensityMatrix joint_propagate(const JointScenario &js, double t);

/// U_o^dagger(t) tr_s[joint_propagate(t)] U_o(t).
[[nodiscard]] DensityMatrix exact_reduced_state(const JointScenario &js, double t);

/// tr_s[V_os(t) (rho_o x rho) V_os^dagger(t)] with
/// V_os(t) = (U_o(t) x U(t))^dagger exp(-itH_os); agrees with
/// exact_reduced_state.
[[nodiscard]] DensityMatrix exact_reduced_state_interaction(const JointScenario &js, double t);

/// Evolution of O under H_o + lambda f(t) G_o for given trajectories, with
/// one cached eigendecomposition per outcome value.
class SurrogateDriver {
  public:
    SurrogateDriver(const ObserverSystem &obs, const std::vector<double> &outcome_values);

    /// Schrodinger propagator from `from` to `to` (0 <= from <= to <= t_n).
    [[nodiscard]] Matrix propagator(const Trajectory &traj, double from, double to) const;
    /// Interaction-picture state at t.
    [[nodiscard]] Matrix state(const Trajectory &traj, double t) const;

  private:
    const ObserverSystem &obs_;
    std::vector<double> values_;
    std::vector<UnitaryGroup> groups_;
    UnitaryGroup free_;
};

[[nodiscard]] DensityMatrix surrogate_propagate(const ObserverSystem &obs, const Trajectory &traj, double t);

struct SurrogateAverage {
    DensityMatrix mean;
    RealMatrix std_error_re;
    RealMatrix std_error_im;
    std::size_t count;
};

/// Ensemble mean of surrogate_propagate, reduced sequentially in
/// trajectory order.
[[nodiscard]] SurrogateAverage surrogate_average(const ObserverSystem &obs, const Ensemble &ens, double t,
                                                 unsigned threads = 1);

struct Comparison {
    double trace_distance = 0.0;
    RealMatrix z_re; // (exact - mc) / standard error; empty without errors
    RealMatrix z_im;
    double max_abs_z = 0.0;
};

[[nodiscard]] Comparison compare(const DensityMatrix &exact, const DensityMatrix &mc);
[[nodiscard]] Comparison compare(const DensityMatrix &exact, const SurrogateAverage &mc);

/// Bi-probabilities of an observer observable X_o under the full joint
/// dynamics.
[[nodiscard]] BiProbTable observer_observable_biprob(const JointScenario &js, const SpectralDecomposition &x_o,
                                                     const TimeGrid &grid, const TableLimits &limits = {});

struct BornEstimate {
    BornTable mean;
    std::vector<double> std_error;
};

/// Monte-Carlo multi-time Born distribution of X_o measured on `grid` while
/// O is driven by each trajectory of the ensemble.
[[nodiscard]] BornEstimate surrogate_observer_born(const ObserverSystem &obs, const SpectralDecomposition &x_o,
                                                   const Ensemble &ens, const TimeGrid &grid,
                                                   unsigned threads = 1);

} // namespace qsurrogate
