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

#include "qsurrogate/random_ops.hpp"

#include <cmath>

namespace qsurrogate {

Matrix random_ginibre(std::mt19937_64 &rng, Index rows, Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

Matrix random_hermitian(std::mt19937_64 &rng, Index d, double scale) {
    const Matrix g = random_ginibre(rng, d, d);
    return scale * 0.5 * (g + g.adjoint());
}

Matrix random_unitary(std::mt19937_64 &rng, Index d) {
    const Matrix g = random_ginibre(rng, d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < d; ++k) {
        const Complex diag = r(k, k);
        if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
    }
    return q;
}

Matrix random_density(std::mt19937_64 &rng, Index d) {
    const Matrix w = random_ginibre(rng, d, d);
    Matrix rho = w * w.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

Matrix random_with_spectrum(std::mt19937_64 &rng, const RealVector &spectrum) {
    const Matrix u = random_unitary(rng, spectrum.size());
    const Matrix f = u * spectrum.cast<Complex>().asDiagonal() * u.adjoint();
    return 0.5 * (f + f.adjoint());
}

} // namespace qsurrogate
