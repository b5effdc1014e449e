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

#include "qsurrogate/linalg.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace qsurrogate {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotDensityMatrix: return "NotDensityMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AmbiguousClustering: return "AmbiguousClustering";
    case ErrorCode::TableTooLarge: return "TableTooLarge";
    case ErrorCode::ZeroProbabilityHistory: return "ZeroProbabilityHistory";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::UnmatchedFrequency: return "UnmatchedFrequency";
    case ErrorCode::NonBlockDiagonalState: return "NonBlockDiagonalState";
    case ErrorCode::InvalidGenerator: return "InvalidGenerator";
    }
    return "Unknown";
}

double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix &m) {
    return m.allFinite();
}

void require_finite(const Matrix &m, std::string_view what) {
    if (!all_finite(m)) {
        throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN or Inf entries");
    }
}

void require_square(const Matrix &m, std::string_view what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << " must be square and non-empty, got " << m.rows() << "x" << m.cols();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

HermitianMatrix::HermitianMatrix(Matrix m, double tol) : m_(std::move(m)) {
    require_square(m_, "Hermitian matrix");
    require_finite(m_, "Hermitian matrix");
    const double dev = max_abs(m_ - m_.adjoint());
    if (dev > tol) {
        std::ostringstream os;
        os << "max |A - A^dagger| = " << dev << " exceeds tolerance " << tol;
        throw Error(ErrorCode::NonHermitianInput, os.str());
    }
}

DensityMatrix::DensityMatrix(Matrix m, double tol, double hermiticity_tol) : m_(std::move(m)) {
    require_square(m_, "density matrix");
    require_finite(m_, "density matrix");
    const double dev = max_abs(m_ - m_.adjoint());
    if (dev > hermiticity_tol) {
        std::ostringstream os;
        os << "density matrix is not Hermitian (deviation " << dev << ")";
        throw Error(ErrorCode::NonHermitianInput, os.str());
    }
    const double tr_err = std::abs(m_.trace() - Complex(1.0, 0.0));
    if (tr_err > tol) {
        std::ostringstream os;
        os << "density matrix trace deviates from 1 by " << tr_err;
        throw Error(ErrorCode::NotDensityMatrix, os.str());
    }
    const double lo = min_eigenvalue(m_);
    if (lo < -tol) {
        std::ostringstream os;
        os << "density matrix has negative eigenvalue " << lo;
        throw Error(ErrorCode::NotDensityMatrix, os.str());
    }
}

DensityMatrix DensityMatrix::pure(const Vector &psi) {
    const Vector n = psi / psi.norm();
    return DensityMatrix(n * n.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Index d) {
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

Superoperator::Superoperator(Index d, Matrix m) : dim(d), matrix(std::move(m)) {
    if (matrix.rows() != d * d || matrix.cols() != d * d) {
        throw Error(ErrorCode::DimensionMismatch, "superoperator matrix side must equal dim^2");
    }
    require_finite(matrix, "superoperator");
}

Superoperator Superoperator::identity(Index d) {
    return {d, Matrix::Identity(d * d, d * d)};
}

Matrix Superoperator::apply(const Matrix &x) const {
    if (x.rows() != dim || x.cols() != dim) {
        throw Error(ErrorCode::DimensionMismatch, "operator does not match superoperator dimension");
    }
    return unvec(matrix * vec(x), dim);
}

Superoperator Superoperator::operator+(const Superoperator &o) const {
    if (o.dim != dim) throw Error(ErrorCode::DimensionMismatch, "superoperator sum");
    return {dim, matrix + o.matrix};
}

Superoperator Superoperator::operator-(const Superoperator &o) const {
    if (o.dim != dim) throw Error(ErrorCode::DimensionMismatch, "superoperator difference");
    return {dim, matrix - o.matrix};
}

Superoperator Superoperator::operator*(Complex s) const {
    return {dim, matrix * s};
}

Superoperator Superoperator::operator*(const Superoperator &o) const {
    if (o.dim != dim) throw Error(ErrorCode::DimensionMismatch, "superoperator composition");
    return {dim, matrix * o.matrix};
}

EigenDecomposition hermitian_eig(const HermitianMatrix &a) {
    // Solve on the exactly Hermitian part; the input is within tolerance of it.
    const Matrix sym = 0.5 * (a.matrix() + a.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NonFinite, "Hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

UnitaryGroup::UnitaryGroup(const HermitianMatrix &h) : eig_(hermitian_eig(h)) {}

Matrix UnitaryGroup::at(double t) const {
    const Index d = dim();
    Vector phases(d);
    for (Index k = 0; k < d; ++k) {
        phases(k) = std::polar(1.0, -t * eig_.eigenvalues(k));
    }
    return eig_.eigenvectors * phases.asDiagonal() * eig_.eigenvectors.adjoint();
}

Matrix propagator(const HermitianMatrix &h, double t) {
    return UnitaryGroup(h).at(t);
}

Matrix expm(const Matrix &a) {
    require_square(a, "matrix exponential argument");
    require_finite(a, "matrix exponential argument");
    return a.exp();
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix partial_trace(const Matrix &m, Subsystem traced, std::pair<Index, Index> dims) {
    const auto [d1, d2] = dims;
    if (d1 <= 0 || d2 <= 0 || m.rows() != d1 * d2 || m.cols() != d1 * d2) {
        std::ostringstream os;
        os << "operator of size " << m.rows() << "x" << m.cols() << " does not match factor dims ("
           << d1 << ", " << d2 << ")";
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    if (traced == Subsystem::Second) {
        Matrix out = Matrix::Zero(d1, d1);
        for (Index i = 0; i < d1; ++i) {
            for (Index j = 0; j < d1; ++j) {
                out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
            }
        }
        return out;
    }
    Matrix out = Matrix::Zero(d2, d2);
    for (Index k = 0; k < d1; ++k) {
        out += m.block(k * d2, k * d2, d2, d2);
    }
    return out;
}

Vector vec(const Matrix &x) {
    return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector &v, Index d) {
    if (v.size() != d * d) {
        throw Error(ErrorCode::DimensionMismatch, "vector length is not dim^2");
    }
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

Superoperator sandwich_superop(const Matrix &l, const Matrix &r) {
    require_square(l, "left factor");
    require_square(r, "right factor");
    if (l.rows() != r.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "sandwich factors differ in dimension");
    }
    return {l.rows(), kron(r.transpose(), l)};
}

Superoperator commutator_superop(const Matrix &h) {
    const Matrix id = Matrix::Identity(h.rows(), h.cols());
    const Complex minus_i(0.0, -1.0);
    return (sandwich_superop(h, id) - sandwich_superop(id, h)) * minus_i;
}

Superoperator unitary_superop(const Matrix &u) {
    return sandwich_superop(u, u.adjoint());
}

double min_eigenvalue(const Matrix &hermitian) {
    const Matrix sym = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double trace_distance(const Matrix &rho, const Matrix &sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "trace distance operands differ in size");
    }
    const Matrix diff = rho - sigma;
    const Matrix sym = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    return trace_distance(rho.matrix(), sigma.matrix());
}

Matrix choi_matrix(const Superoperator &map) {
    const Index d = map.dim;
    Matrix choi = Matrix::Zero(d * d, d * d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            Matrix e = Matrix::Zero(d, d);
            e(i, j) = 1.0;
            choi.block(i * d, j * d, d, d) = map.apply(e);
        }
    }
    return choi;
}

} // namespace qsurrogate
