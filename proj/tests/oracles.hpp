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

// Brute-force reference implementations used by the tests. They share no
// code with the library beyond Eigen's dense matrix type.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;

inline M series_exp(const M &a) {
    double norm = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < a.cols(); ++j) row += std::abs(a(i, j));
        norm = std::max(norm, row);
    }
    int squarings = 0;
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    const M scaled = a / std::pow(2.0, squarings);
    M term = M::Identity(a.rows(), a.cols());
    M sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

inline M unitary(const M &h, double t) { return series_exp(C(0.0, -t) * h); }

inline M loop_kron(const M &a, const M &b) {
    M out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// Traces out the second factor.
inline M trace_second(const M &m, Eigen::Index d1, Eigen::Index d2) {
    M out = M::Zero(d1, d1);
    for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index j = 0; j < d1; ++j)
            for (Eigen::Index k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
    return out;
}

inline M trace_first(const M &m, Eigen::Index d1, Eigen::Index d2) {
    M out = M::Zero(d2, d2);
    for (Eigen::Index i = 0; i < d2; ++i)
        for (Eigen::Index j = 0; j < d2; ++j)
            for (Eigen::Index k = 0; k < d1; ++k) out(i, j) += m(k * d2 + i, k * d2 + j);
    return out;
}

inline std::vector<std::size_t> digits(std::size_t flat, std::size_t m, std::size_t n) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = n; i-- > 0;) {
        out[i] = flat % m;
        flat /= m;
    }
    return out;
}

inline std::size_t pow_size(std::size_t m, std::size_t n) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= m;
    return r;
}

// A_f = P(f_n, t_n) ... P(f_1, t_1) with Heisenberg projectors.
inline M chain(const M &h, const std::vector<M> &proj, const std::vector<double> &times,
               const std::vector<std::size_t> &seq) {
    M a = M::Identity(h.rows(), h.cols());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const M u = unitary(h, times[i]);
        a = u.adjoint() * proj[seq[i]] * u * a;
    }
    return a;
}

// Q[plus * m^n + minus] = tr(A_plus rho A_minus^dagger).
inline std::vector<C> biprob(const M &h, const std::vector<M> &proj, const M &rho, const std::vector<double> &times) {
    const std::size_t m = proj.size();
    const std::size_t n = times.size();
    const std::size_t count = pow_size(m, n);
    std::vector<M> chains;
    for (std::size_t f = 0; f < count; ++f) chains.push_back(chain(h, proj, times, digits(f, m, n)));
    std::vector<C> out(count * count);
    for (std::size_t p = 0; p < count; ++p)
        for (std::size_t q = 0; q < count; ++q) out[p * count + q] = (chains[p] * rho * chains[q].adjoint()).trace();
    return out;
}

inline std::vector<double> born(const M &h, const std::vector<M> &proj, const M &rho, const std::vector<double> &times) {
    const std::size_t m = proj.size();
    const std::size_t n = times.size();
    std::vector<double> out;
    for (std::size_t f = 0; f < pow_size(m, n); ++f) {
        const M a = chain(h, proj, times, digits(f, m, n));
        out.push_back((a * rho * a.adjoint()).trace().real());
    }
    return out;
}

inline M pauli_x() {
    M m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline M pauli_y() {
    M m(2, 2);
    m << 0, C(0, -1), C(0, 1), 0;
    return m;
}
inline M pauli_z() {
    M m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
inline M ket_projector(int k, Eigen::Index d = 2) {
    M m = M::Zero(d, d);
    m(k, k) = 1.0;
    return m;
}

// Closed-form Rabi propagator for H = (omega / 2) sigma_x.
inline M rabi_unitary(double omega, double t) {
    const double c = std::cos(omega * t / 2.0);
    const double s = std::sin(omega * t / 2.0);
    M u(2, 2);
    u << c, C(0, -s), C(0, -s), c;
    return u;
}

// Row-major superoperator of a linear map on d x d matrices:
// column (i * d + j) holds the row-major image of E_ij.
inline M row_major_superop(const std::function<M(const M &)> &map, Eigen::Index d) {
    M out(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            M e = M::Zero(d, d);
            e(i, j) = 1.0;
            const M img = map(e);
            for (Eigen::Index k = 0; k < d; ++k)
                for (Eigen::Index l = 0; l < d; ++l) out(k * d + l, i * d + j) = img(k, l);
        }
    return out;
}

inline M apply_row_major(const M &s, const M &x) {
    const Eigen::Index d = x.rows();
    Eigen::VectorXcd v(d * d);
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index l = 0; l < d; ++l) v(k * d + l) = x(k, l);
    const Eigen::VectorXcd w = s * v;
    M out(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index l = 0; l < d; ++l) out(k, l) = w(k * d + l);
    return out;
}

// Bi-probabilities of a Markov model with generator `l` (row-major),
// Q = tr[P(f_n) L(t_n - t_{n-1}) ... P(f_1) L(t_1) rho P(g_1) ... P(g_n)].
inline std::vector<C> markov_biprob(const M &l, const std::vector<M> &proj, const M &rho,
                                    const std::vector<double> &times) {
    const std::size_t m = proj.size();
    const std::size_t n = times.size();
    const std::size_t count = pow_size(m, n);
    std::vector<C> out(count * count);
    for (std::size_t p = 0; p < count; ++p)
        for (std::size_t q = 0; q < count; ++q) {
            const auto fp = digits(p, m, n);
            const auto fq = digits(q, m, n);
            M x = rho;
            double prev = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                x = apply_row_major(series_exp(l * (times[i] - prev)), x);
                x = proj[fp[i]] * x * proj[fq[i]];
                prev = times[i];
            }
            out[p * count + q] = x.trace();
        }
    return out;
}

} // namespace oracle
