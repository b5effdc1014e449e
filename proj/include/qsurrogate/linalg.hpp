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
 * Dense complex linear algebra used by every other module: validated
 * Hermitian and density-matrix wrappers, unitary propagators, tensor
 * products, partial traces and superoperators.
 *
 * Operators are vectorized by column stacking, so that
 * vec(L X R) = (R^T kron L) vec(X).
 */

#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>

#include "qsurrogate/error.hpp"

namespace qsurrogate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kDensityTol = 1e-10;

struct Tolerances {
    double hermiticity = kHermiticityTol;
    double unitarity = kUnitarityTol;
    double density = kDensityTol;
};

[[nodiscard]] double max_abs(const Matrix &m);
[[nodiscard]] bool all_finite(const Matrix &m);
void require_finite(const Matrix &m, std::string_view what);
void require_square(const Matrix &m, std::string_view what);

/// Square matrix equal to its adjoint within a tolerance on the max-norm.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(Matrix m, double tol = kHermiticityTol);

    [[nodiscard]] const Matrix &matrix() const noexcept { return m_; }
    [[nodiscard]] Index dim() const noexcept { return m_.rows(); }

  private:
    Matrix m_;
};

/// Hermitian, unit trace, and positive semidefinite up to `tol`.
class DensityMatrix {
  public:
    explicit DensityMatrix(Matrix m, double tol = kDensityTol,
                           double hermiticity_tol = kHermiticityTol);

    [[nodiscard]] const Matrix &matrix() const noexcept { return m_; }
    [[nodiscard]] Index dim() const noexcept { return m_.rows(); }

    [[nodiscard]] static DensityMatrix pure(const Vector &psi);
    [[nodiscard]] static DensityMatrix maximally_mixed(Index d);

  private:
    Matrix m_;
};

/// Linear map on d x d operators, stored as a d^2 x d^2 matrix acting on
/// column-stacked operators.
struct Superoperator {
    Index dim = 0;
    Matrix matrix;

    Superoperator() = default;
    Superoperator(Index d, Matrix m);

    [[nodiscard]] static Superoperator identity(Index d);
    [[nodiscard]] Matrix apply(const Matrix &x) const;
    [[nodiscard]] Superoperator operator+(const Superoperator &o) const;
    [[nodiscard]] Superoperator operator-(const Superoperator &o) const;
    [[nodiscard]] Superoperator operator*(Complex s) const;
    [[nodiscard]] Superoperator operator*(const Superoperator &o) const; // composition this∘o
};

struct EigenDecomposition {
    RealVector eigenvalues; // ascending
    Matrix eigenvectors;    // columns, unitary
};

[[nodiscard]] EigenDecomposition hermitian_eig(const HermitianMatrix &a);

/// Caches the eigendecomposition of H so that exp(-itH) is cheap for many t.
class UnitaryGroup {
  public:
    explicit UnitaryGroup(const HermitianMatrix &h);

    [[nodiscard]] Matrix at(double t) const;
    [[nodiscard]] Index dim() const noexcept { return eig_.eigenvectors.rows(); }

  private:
    EigenDecomposition eig_;
};

/// exp(-itH).
[[nodiscard]] Matrix propagator(const HermitianMatrix &h, double t);

/// General matrix exponential (scaling and squaring with Pade approximants).
[[nodiscard]] Matrix expm(const Matrix &a);

[[nodiscard]] Matrix kron(const Matrix &a, const Matrix &b);

enum class Subsystem { First, Second };

/// Traces out the named factor of a bipartite operator with factor dims
/// (d_first, d_second).
[[nodiscard]] Matrix partial_trace(const Matrix &m, Subsystem traced, std::pair<Index, Index> dims);

[[nodiscard]] Vector vec(const Matrix &x);
[[nodiscard]] Matrix unvec(const Vector &v, Index d);

/// X -> L X R.
[[nodiscard]] Superoperator sandwich_superop(const Matrix &l, const Matrix &r);

/// X -> -i[H, X].
[[nodiscard]] Superoperator commutator_superop(const Matrix &h);

/// X -> U X U^dagger.
[[nodiscard]] Superoperator unitary_superop(const Matrix &u);

/// Half the trace norm of (rho - sigma). Inputs need only be Hermitian.
[[nodiscard]] double trace_distance(const Matrix &rho, const Matrix &sigma);
[[nodiscard]] double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma);

[[nodiscard]] double min_eigenvalue(const Matrix &hermitian);

/// Choi matrix sum_ij |i><j| kron Phi(|i><j|).
[[nodiscard]] Matrix choi_matrix(const Superoperator &map);

} // namespace qsurrogate
