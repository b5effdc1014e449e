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
 * Markovian open-system models of the measured observable: a GKLS
 * generator on the observable's d-dimensional space, bi-probabilities built
 * from alternating projector sandwiches and the semigroup Lambda(t), and
 * structural tests on the generator relative to the observable's
 * eigen-sectors.
 */

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsurrogate/consistency.hpp"
#include "qsurrogate/process.hpp"

namespace qsurrogate {

inline constexpr double kGeneratorTol = 1e-12;

/// A dissipation rate attached to a Bohr frequency of H_a.
struct RateTerm {
    double omega;
    Complex gamma;
};

/// One jump operator G_omega with its complex rate.
struct JumpTerm {
    double omega;
    Matrix g_omega;
    Complex gamma;
};

class GKLSGenerator {
  public:
    /// L_total = -i[H_a, .] + mu^2 L with L assembled from `terms`.
    GKLSGenerator(HermitianMatrix h_a, std::vector<JumpTerm> terms, double mu);

    /// A generator given directly as a d^2 x d^2 matrix on column-stacked
    /// operators. Only trace and Hermiticity preservation are checked.
    [[nodiscard]] static GKLSGenerator from_matrix(Index d, Matrix l_total, double tol = kGeneratorTol);

    [[nodiscard]] Index dim() const noexcept { return total_.dim; }
    [[nodiscard]] const std::optional<HermitianMatrix> &h_a() const noexcept { return h_a_; }
    [[nodiscard]] const std::vector<JumpTerm> &terms() const noexcept { return terms_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] const Superoperator &total() const noexcept { return total_; }

    /// max |tr L(E_ij)| over matrix units.
    [[nodiscard]] double trace_defect() const;
    /// max |L(E_ji) - L(E_ij)^dagger| over matrix units.
    [[nodiscard]] double hermiticity_defect() const;

  private:
    GKLSGenerator() = default;
    void validate(double tol) const;

    std::optional<HermitianMatrix> h_a_;
    std::vector<JumpTerm> terms_;
    double mu_ = 1.0;
    Superoperator total_;
};

/// Splits G_a along the Bohr frequencies of H_a and attaches the given
/// rates. Frequencies are matched within `cluster_tol`, defaulting to the
/// spectral clustering tolerance of H_a.
[[nodiscard]] GKLSGenerator build_gkls(const HermitianMatrix &h_a, const HermitianMatrix &g_a,
                                       const std::vector<RateTerm> &rates, double mu,
                                       std::optional<double> cluster_tol = {});

/// Distinct Bohr frequencies eps_a - eps_b of H, ascending.
[[nodiscard]] std::vector<double> bohr_frequencies(const HermitianMatrix &h, std::optional<double> cluster_tol = {});

class QRFModel final : public ProcessModel {
  public:
    QRFModel(GKLSGenerator generator, SpectralDecomposition f_a, DensityMatrix rho_a);

    [[nodiscard]] const GKLSGenerator &generator() const noexcept { return gen_; }
    [[nodiscard]] const SpectralDecomposition &observable() const override { return f_; }
    [[nodiscard]] const DensityMatrix &initial_state() const override { return rho_; }
    /// Lambda(dt) = exp(dt L_total).
    [[nodiscard]] Superoperator evolution(double dt) const override;

  private:
    GKLSGenerator gen_;
    SpectralDecomposition f_;
    DensityMatrix rho_;
};

[[nodiscard]] BiProbTable qrf_bi_probability(const QRFModel &model, const TimeGrid &grid,
                                             const TableLimits &limits = {});

/// Qubit with F = sigma_z / 2 and L_total = -(gamma/2)[sigma_x, [sigma_x, .]].
[[nodiscard]] QRFModel rtn_model(double gamma, DensityMatrix rho_a);

/// Delta = sum_f P(f) . P(f), the projection onto the block-diagonal sector.
[[nodiscard]] Superoperator block_diagonal_projector(const SpectralDecomposition &f);

struct NcgdReport {
    double max_abs_violation = 0.0;
    std::optional<std::pair<double, double>> witness;
    double threshold = kDefaultEpsilon;
    bool passed = true;
    std::vector<std::pair<double, double>> pairs;
};

/// max |Delta Lambda(t) Delta - Delta Lambda(t - t') Delta Lambda(t') Delta|
/// over pairs (t, t') with t > t' > 0.
[[nodiscard]] NcgdReport check_ncgd(const QRFModel &model, const std::vector<std::pair<double, double>> &pairs,
                                    double epsilon = kDefaultEpsilon);

/// (t_b - t_a, t_c - t_a) for 0 <= a < c < b <= n with t_0 = 0.
[[nodiscard]] std::vector<std::pair<double, double>> grid_time_pairs(const TimeGrid &grid);

struct BlockStructure {
    bool lower_triangular = false;
    bool upper_triangular = false;
    double lower_violation = 0.0;
    double upper_violation = 0.0;
    /// max |Delta Lambda(t) Delta - Delta Lambda(t)| over sample times.
    double non_activating_residual = 0.0;
    /// max |Delta Lambda(t) Delta - Lambda(t) Delta| over sample times.
    double non_generating_residual = 0.0;
    std::vector<double> sample_times;
    std::vector<std::string> labels;
};

inline const std::vector<double> kDefaultSampleTimes{0.25, 1.0, 4.0};

[[nodiscard]] BlockStructure classify_block_structure(const QRFModel &model, double epsilon = kDefaultEpsilon,
                                                      const std::vector<double> &sample_times = kDefaultSampleTimes);

struct EquivalenceReport {
    NcgdReport ncgd;
    double cm_max_abs_violation = 0.0;
    bool cm_passed = true;
    /// Grid prefixes (by length) the CM check ran on.
    std::vector<std::size_t> cm_orders;
    bool agree = true;
};

/// NCGD on grid_time_pairs(grid) and CM on every prefix of the grid of
/// length >= 2. Requires Delta rho_a = rho_a within epsilon.
[[nodiscard]] EquivalenceReport verify_ncgd_cm_equivalence(const QRFModel &model, const TimeGrid &grid,
                                                           double epsilon = kDefaultEpsilon,
                                                           const TableLimits &limits = {});

/// Smallest eigenvalue of the Choi matrix of Lambda(t).
[[nodiscard]] double choi_min_eigenvalue(const QRFModel &model, double t);

} // namespace qsurrogate
