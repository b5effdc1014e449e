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

#include "qsurrogate/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsurrogate {

SpectralDecomposition::SpectralDecomposition(std::vector<Outcome> outcomes, Index dim, bool clustered)
    : outcomes_(std::move(outcomes)), dim_(dim), clustered_(clustered) {
    if (outcomes_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "spectral decomposition needs at least one outcome");
    }
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        const auto &p = outcomes_[i].projector;
        if (p.rows() != dim_ || p.cols() != dim_) {
            throw Error(ErrorCode::DimensionMismatch, "projector does not match Hilbert dimension");
        }
        if (i > 0 && !(outcomes_[i].value > outcomes_[i - 1].value)) {
            throw Error(ErrorCode::InvalidArgument, "outcome values must be strictly increasing");
        }
    }
}

std::vector<double> SpectralDecomposition::values() const {
    std::vector<double> out;
    out.reserve(outcomes_.size());
    for (const auto &o : outcomes_) out.push_back(o.value);
    return out;
}

std::vector<Matrix> SpectralDecomposition::projectors() const {
    std::vector<Matrix> out;
    out.reserve(outcomes_.size());
    for (const auto &o : outcomes_) out.push_back(o.projector);
    return out;
}

Matrix SpectralDecomposition::reconstruct() const {
    Matrix f = Matrix::Zero(dim_, dim_);
    for (const auto &o : outcomes_) f += o.value * o.projector;
    return f;
}

SpectralDecomposition SpectralDecomposition::tensor_identity(Index other_dim) const {
    const Matrix id = Matrix::Identity(other_dim, other_dim);
    std::vector<Outcome> lifted;
    lifted.reserve(outcomes_.size());
    for (const auto &o : outcomes_) {
        lifted.push_back({o.value, kron(o.projector, id), o.multiplicity * static_cast<int>(other_dim)});
    }
    return {std::move(lifted), dim_ * other_dim, clustered_};
}

double default_cluster_tol(const RealVector &ascending_eigenvalues) {
    const double range = ascending_eigenvalues.size() == 0
                             ? 0.0
                             : ascending_eigenvalues.maxCoeff() - ascending_eigenvalues.minCoeff();
    return 1e-9 * std::max(1.0, range);
}

SpectralDecomposition spectral_decompose(const HermitianMatrix &f, std::optional<double> cluster_tol) {
    const auto eig = hermitian_eig(f);
    const double tol = cluster_tol.value_or(default_cluster_tol(eig.eigenvalues));
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "cluster_tol must be positive");
    }
    const Index d = f.dim();

    std::vector<std::pair<Index, Index>> groups; // [begin, end)
    Index begin = 0;
    for (Index k = 1; k <= d; ++k) {
        if (k == d || eig.eigenvalues(k) - eig.eigenvalues(k - 1) > tol) {
            groups.emplace_back(begin, k);
            begin = k;
        }
    }

    std::vector<Outcome> outcomes;
    bool clustered = false;
    for (const auto &[b, e] : groups) {
        const Index mult = e - b;
        const double span = eig.eigenvalues(e - 1) - eig.eigenvalues(b);
        if (span > tol) {
            std::ostringstream os;
            os << "eigenvalues " << eig.eigenvalues(b) << " .. " << eig.eigenvalues(e - 1)
               << " chain into one cluster wider than cluster_tol " << tol;
            throw Error(ErrorCode::AmbiguousClustering, os.str());
        }
        if (mult > 1 && span > 0.0) clustered = true;
        const double mean = eig.eigenvalues.segment(b, mult).mean();
        const auto vecs = eig.eigenvectors.middleCols(b, mult);
        outcomes.push_back({mean, vecs * vecs.adjoint(), static_cast<int>(mult)});
        if (outcomes.size() > 1) {
            const double gap = outcomes.back().value - outcomes[outcomes.size() - 2].value;
            if (gap <= tol) {
                throw Error(ErrorCode::AmbiguousClustering,
                            "cluster representatives are not separated by more than cluster_tol");
            }
        }
    }
    return {std::move(outcomes), d, clustered};
}

std::vector<Matrix> heisenberg_projectors(const SpectralDecomposition &sd, const UnitaryGroup &group,
                                          double t) {
    if (group.dim() != sd.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "Hamiltonian and observable dimensions differ");
    }
    const Matrix u = group.at(t);
    std::vector<Matrix> out;
    out.reserve(sd.size());
    for (const auto &o : sd.outcomes()) out.push_back(u.adjoint() * o.projector * u);
    return out;
}

std::vector<Matrix> heisenberg_projectors(const SpectralDecomposition &sd, const HermitianMatrix &h,
                                          double t) {
    if (h.dim() != sd.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "Hamiltonian and observable dimensions differ");
    }
    return heisenberg_projectors(sd, UnitaryGroup(h), t);
}

} // namespace qsurrogate
