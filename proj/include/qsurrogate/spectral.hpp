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

#include <optional>
#include <vector>

#include "qsurrogate/linalg.hpp"

namespace qsurrogate {

struct Outcome {
    double value;
    Matrix projector;
    int multiplicity;
};

/// Distinct eigenvalues of an observable with their eigenspace projectors,
/// ordered by increasing eigenvalue. Outcome indices used throughout the
/// library refer to positions in this list.
class SpectralDecomposition {
  public:
    SpectralDecomposition(std::vector<Outcome> outcomes, Index dim, bool clustered);

    [[nodiscard]] std::size_t size() const noexcept { return outcomes_.size(); }
    [[nodiscard]] Index dim() const noexcept { return dim_; }
    [[nodiscard]] const Outcome &operator[](std::size_t i) const { return outcomes_.at(i); }
    [[nodiscard]] const std::vector<Outcome> &outcomes() const noexcept { return outcomes_; }
    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::vector<Matrix> projectors() const;

    /// True when numerically distinct eigenvalues were merged into one outcome.
    [[nodiscard]] bool clustered() const noexcept { return clustered_; }

    /// sum_f f P(f).
    [[nodiscard]] Matrix reconstruct() const;

    /// The same observable acting on the first factor of (this space) x (other).
    [[nodiscard]] SpectralDecomposition tensor_identity(Index other_dim) const;

  private:
    std::vector<Outcome> outcomes_;
    Index dim_;
    bool clustered_;
};

/// 1e-9 * max(1, spectral range).
[[nodiscard]] double default_cluster_tol(const RealVector &ascending_eigenvalues);

/// Groups eigenvalues whose consecutive gaps are <= cluster_tol. Throws
/// AmbiguousClustering if a resulting group is wider than cluster_tol or two
/// group representatives end up within cluster_tol of each other.
[[nodiscard]] SpectralDecomposition spectral_decompose(const HermitianMatrix &f,
                                                       std::optional<double> cluster_tol = {});

/// P(f, t) = U^dagger(t) P(f) U(t) for every outcome.
[[nodiscard]] std::vector<Matrix> heisenberg_projectors(const SpectralDecomposition &sd,
                                                        const HermitianMatrix &h, double t);
[[nodiscard]] std::vector<Matrix> heisenberg_projectors(const SpectralDecomposition &sd,
                                                        const UnitaryGroup &group, double t);

} // namespace qsurrogate
