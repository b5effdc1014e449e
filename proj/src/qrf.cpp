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

#include "qsurrogate/qrf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace qsurrogate {

namespace {

Matrix matrix_unit(Index d, Index i, Index j) {
    Matrix e = Matrix::Zero(d, d);
    e(i, j) = 1.0;
    return e;
}

Superoperator anticommutator_superop(const Matrix &a) {
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    return sandwich_superop(a, id) + sandwich_superop(id, a);
}

} // namespace

GKLSGenerator::GKLSGenerator(HermitianMatrix h_a, std::vector<JumpTerm> terms, double mu)
    : h_a_(std::move(h_a)), terms_(std::move(terms)), mu_(mu) {
    if (!std::isfinite(mu_)) throw Error(ErrorCode::NonFinite, "mu is not finite");
    const Index d = h_a_->dim();
    Matrix lamb_shift = Matrix::Zero(d, d);
    Superoperator dissipator(d, Matrix::Zero(d * d, d * d));
    for (const auto &term : terms_) {
        if (term.g_omega.rows() != d || term.g_omega.cols() != d) {
            throw Error(ErrorCode::DimensionMismatch, "jump operator does not match H_a");
        }
        if (!std::isfinite(term.gamma.real()) || !std::isfinite(term.gamma.imag())) {
            throw Error(ErrorCode::NonFinite, "rate is not finite");
        }
        if (term.gamma.real() < 0.0) throw Error(ErrorCode::NegativeRate, "rate has negative real part");
        const Matrix &g = term.g_omega;
        const Matrix gg = g.adjoint() * g;
        lamb_shift += term.gamma.imag() * gg;
        dissipator = dissipator + (sandwich_superop(g, g.adjoint()) - anticommutator_superop(gg) * 0.5) *
                                      Complex(2.0 * term.gamma.real(), 0.0);
    }
    const Superoperator l = commutator_superop(lamb_shift) + dissipator;
    total_ = commutator_superop(h_a_->matrix()) + l * Complex(mu_ * mu_, 0.0);
    validate(kGeneratorTol);
}

GKLSGenerator GKLSGenerator::from_matrix(Index d, Matrix l_total, double tol) {
    GKLSGenerator gen;
    gen.total_ = Superoperator(d, std::move(l_total));
    gen.validate(tol);
    return gen;
}

double GKLSGenerator::trace_defect() const {
    const Index d = dim();
    double worst = 0.0;
    for (Index c = 0; c < d * d; ++c) {
        Complex tr = 0.0;
        for (Index k = 0; k < d; ++k) tr += total_.matrix(k + k * d, c);
        worst = std::max(worst, std::abs(tr));
    }
    return worst;
}

double GKLSGenerator::hermiticity_defect() const {
    const Index d = dim();
    double worst = 0.0;
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            const Matrix a = total_.apply(matrix_unit(d, i, j));
            const Matrix b = total_.apply(matrix_unit(d, j, i));
            worst = std::max(worst, max_abs(b - a.adjoint()));
        }
    }
    return worst;
}

void GKLSGenerator::validate(double tol) const {
    const double scale = std::max(1.0, max_abs(total_.matrix));
    const double tr = trace_defect();
    const double herm = hermiticity_defect();
    if (tr > tol * scale || herm > tol * scale) {
        std::ostringstream os;
        os << "generator is not trace and Hermiticity preserving (trace defect " << tr << ", Hermiticity defect "
           << herm << ")";
        throw Error(ErrorCode::InvalidGenerator, os.str());
    }
}

namespace {

double frequency_tol(const HermitianMatrix &h, std::optional<double> cluster_tol) {
    if (cluster_tol) return *cluster_tol;
    return default_cluster_tol(hermitian_eig(h).eigenvalues);
}

} // namespace

std::vector<double> bohr_frequencies(const HermitianMatrix &h, std::optional<double> cluster_tol) {
    const double tol = frequency_tol(h, cluster_tol);
    const SpectralDecomposition levels = spectral_decompose(h, tol);
    std::vector<double> diffs;
    for (const auto &a : levels.outcomes()) {
        for (const auto &b : levels.outcomes()) diffs.push_back(a.value - b.value);
    }
    std::sort(diffs.begin(), diffs.end());
    std::vector<double> out;
    for (double w : diffs) {
        if (out.empty() || w - out.back() > tol) out.push_back(w);
    }
    return out;
}

GKLSGenerator build_gkls(const HermitianMatrix &h_a, const HermitianMatrix &g_a, const std::vector<RateTerm> &rates,
                         double mu, std::optional<double> cluster_tol) {
    if (h_a.dim() != g_a.dim()) throw Error(ErrorCode::DimensionMismatch, "H_a and G_a dimensions differ");
    const double tol = frequency_tol(h_a, cluster_tol);
    const SpectralDecomposition levels = spectral_decompose(h_a, tol);
    std::vector<JumpTerm> terms;
    for (std::size_t r = 0; r < rates.size(); ++r) {
        const RateTerm &rate = rates[r];
        if (!std::isfinite(rate.omega)) throw Error(ErrorCode::NonFinite, "rate frequency is not finite");
        if (rate.gamma.real() < 0.0) {
            std::ostringstream os;
            os << "rate at omega = " << rate.omega << " has negative real part " << rate.gamma.real();
            throw Error(ErrorCode::NegativeRate, os.str());
        }
        for (std::size_t s = 0; s < r; ++s) {
            if (std::abs(rates[s].omega - rate.omega) <= tol) {
                throw Error(ErrorCode::InvalidArgument, "two rates are attached to the same Bohr frequency");
            }
        }
        Matrix g = Matrix::Zero(h_a.dim(), h_a.dim());
        bool matched = false;
        for (const auto &a : levels.outcomes()) {
            for (const auto &b : levels.outcomes()) {
                if (std::abs(a.value - b.value - rate.omega) <= tol) {
                    g += a.projector * g_a.matrix() * b.projector;
                    matched = true;
                }
            }
        }
        if (!matched) {
            std::ostringstream os;
            os << "omega = " << rate.omega << " is not a Bohr frequency of H_a";
            throw Error(ErrorCode::UnmatchedFrequency, os.str());
        }
        terms.push_back({rate.omega, std::move(g), rate.gamma});
    }
    return GKLSGenerator(h_a, std::move(terms), mu);
}

QRFModel::QRFModel(GKLSGenerator generator, SpectralDecomposition f_a, DensityMatrix rho_a)
    : gen_(std::move(generator)), f_(std::move(f_a)), rho_(std::move(rho_a)) {
    if (f_.dim() != gen_.dim() || rho_.dim() != gen_.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "generator, observable and state dimensions differ");
    }
}

Superoperator QRFModel::evolution(double dt) const {
    if (!(dt >= 0.0)) throw Error(ErrorCode::InvalidArgument, "evolution interval must be non-negative");
    if (dt == 0.0) return Superoperator::identity(gen_.dim());
    return {gen_.dim(), expm(gen_.total().matrix * dt)};
}

BiProbTable qrf_bi_probability(const QRFModel &model, const TimeGrid &grid, const TableLimits &limits) {
    return superoperator_bi_probability(model, grid, limits);
}

QRFModel rtn_model(double gamma, DensityMatrix rho_a) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw Error(ErrorCode::NonPositiveRate, "telegraph switching rate must be positive");
    }
    if (rho_a.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "telegraph model needs a qubit state");
    Matrix sx(2, 2);
    sx << 0, 1, 1, 0;
    Matrix sz(2, 2);
    sz << 1, 0, 0, -1;
    const HermitianMatrix zero(Matrix::Zero(2, 2));
    GKLSGenerator gen = build_gkls(zero, HermitianMatrix(sx), {{0.0, Complex(gamma / 2.0, 0.0)}}, 1.0);
    return {std::move(gen), spectral_decompose(HermitianMatrix(0.5 * sz)), std::move(rho_a)};
}

Superoperator block_diagonal_projector(const SpectralDecomposition &f) {
    const Index d = f.dim();
    Superoperator delta(d, Matrix::Zero(d * d, d * d));
    for (const auto &o : f.outcomes()) delta = delta + sandwich_superop(o.projector, o.projector);
    return delta;
}

namespace {

class LambdaCache {
  public:
    explicit LambdaCache(const QRFModel &model) : model_(model) {}
    const Matrix &at(double t) {
        auto it = cache_.find(t);
        if (it == cache_.end()) it = cache_.emplace(t, model_.evolution(t).matrix).first;
        return it->second;
    }

  private:
    const QRFModel &model_;
    std::map<double, Matrix> cache_;
};

} // namespace

NcgdReport check_ncgd(const QRFModel &model, const std::vector<std::pair<double, double>> &pairs, double epsilon) {
    const Matrix delta = block_diagonal_projector(model.observable()).matrix;
    LambdaCache lambda(model);
    NcgdReport report;
    report.threshold = epsilon;
    report.pairs = pairs;
    for (const auto &[t, tp] : pairs) {
        if (!(t > tp) || !(tp > 0.0)) throw Error(ErrorCode::InvalidArgument, "NCGD pairs need t > t' > 0");
        const Matrix lhs = delta * lambda.at(t) * delta;
        const Matrix rhs = delta * lambda.at(t - tp) * delta * lambda.at(tp) * delta;
        const double v = max_abs(lhs - rhs);
        if (!report.witness || v > report.max_abs_violation) {
            report.max_abs_violation = v;
            report.witness = std::make_pair(t, tp);
        }
    }
    report.passed = report.max_abs_violation <= epsilon;
    return report;
}

std::vector<std::pair<double, double>> grid_time_pairs(const TimeGrid &grid) {
    std::vector<double> t{0.0};
    t.insert(t.end(), grid.times().begin(), grid.times().end());
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t a = 0; a < t.size(); ++a) {
        for (std::size_t b = a + 2; b < t.size(); ++b) {
            for (std::size_t c = a + 1; c < b; ++c) pairs.emplace_back(t[b] - t[a], t[c] - t[a]);
        }
    }
    return pairs;
}

BlockStructure classify_block_structure(const QRFModel &model, double epsilon,
                                        const std::vector<double> &sample_times) {
    const auto &f = model.observable();
    const Matrix &l = model.generator().total().matrix;
    BlockStructure out;
    out.sample_times = sample_times;
    for (std::size_t p = 0; p < f.size(); ++p) {
        for (std::size_t m = 0; m < f.size(); ++m) {
            if (p == m) continue;
            const Matrix off = sandwich_superop(f[p].projector, f[m].projector).matrix;
            for (std::size_t k = 0; k < f.size(); ++k) {
                const Matrix diag = sandwich_superop(f[k].projector, f[k].projector).matrix;
                out.lower_violation = std::max(out.lower_violation, max_abs(diag * l * off));
                out.upper_violation = std::max(out.upper_violation, max_abs(off * l * diag));
            }
        }
    }
    out.lower_triangular = out.lower_violation <= epsilon;
    out.upper_triangular = out.upper_violation <= epsilon;

    const Matrix delta = block_diagonal_projector(f).matrix;
    for (double t : sample_times) {
        const Matrix lam = model.evolution(t).matrix;
        const Matrix both = delta * lam * delta;
        out.non_activating_residual = std::max(out.non_activating_residual, max_abs(both - delta * lam));
        out.non_generating_residual = std::max(out.non_generating_residual, max_abs(both - lam * delta));
    }
    if (out.lower_triangular) out.labels.emplace_back("coherence non-activating");
    if (out.upper_triangular) out.labels.emplace_back("coherence non-generating");
    return out;
}

EquivalenceReport verify_ncgd_cm_equivalence(const QRFModel &model, const TimeGrid &grid, double epsilon,
                                             const TableLimits &limits) {
    const Superoperator delta = block_diagonal_projector(model.observable());
    const Matrix &rho = model.initial_state().matrix();
    const double off_block = max_abs(delta.apply(rho) - rho);
    if (off_block > epsilon) {
        std::ostringstream os;
        os << "initial state is not block diagonal in the observable's eigen-sectors (defect " << off_block << ")";
        throw Error(ErrorCode::NonBlockDiagonalState, os.str());
    }
    EquivalenceReport report;
    report.ncgd = check_ncgd(model, grid_time_pairs(grid), epsilon);
    for (std::size_t k = 2; k <= grid.size(); ++k) {
        const ConsistencyReport cm = check_cm(qrf_bi_probability(model, grid.prefix(k), limits), epsilon);
        report.cm_max_abs_violation =
            std::max(report.cm_max_abs_violation, cm.get(Condition::ConsistentMeasurements).max_abs_violation);
        report.cm_orders.push_back(k);
    }
    report.cm_passed = report.cm_max_abs_violation <= epsilon;
    report.agree = report.cm_passed == report.ncgd.passed;
    return report;
}

double choi_min_eigenvalue(const QRFModel &model, double t) {
    return min_eigenvalue(choi_matrix(model.evolution(t)));
}

} // namespace qsurrogate
