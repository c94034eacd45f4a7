// Copyright 2026 The spinqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spinqec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spinqec/error.hpp"

namespace spinqec {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw PreconditionError("ComplexMatrix: " + std::to_string(data_.size()) + " entries for a " +
                                std::to_string(rows_) + "x" + std::to_string(cols_) + " matrix");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    if (!is_square()) return INFINITY;
    double d = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return d;
}

CVector ComplexMatrix::apply(std::span<const Complex> v) const {
    if (v.size() != cols_) {
        throw PreconditionError("ComplexMatrix::apply: vector length " + std::to_string(v.size()) +
                                " does not match " + std::to_string(cols_) + " columns");
    }
    CVector out(rows_, Complex{0.0, 0.0});
    for (std::size_t r = 0; r < rows_; ++r) {
        Complex acc = 0.0;
        const Complex* row = &data_[r * cols_];
        for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

std::vector<Complex> ComplexMatrix::column(std::size_t c) const {
    std::vector<Complex> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw PreconditionError("ComplexMatrix +=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw PreconditionError("ComplexMatrix -=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("ComplexMatrix *: inner dimensions differ");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{0.0, 0.0}) continue;
            const Complex* brow = &b.data_[k * b.cols_];
            Complex* orow = &out.data_[i * out.cols_];
            for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("max_abs_diff: shape mismatch");
    double d = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) d = std::max(d, std::abs(ea[i] - eb[i]));
    return d;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex s = a(ar, ac);
            if (s == Complex{0.0, 0.0}) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
    return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix EigenDecomposition::reconstruct() const {
    const std::size_t n = eigenvalues.size();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vik = eigenvectors(i, k) * eigenvalues[k];
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eigenvectors(j, k));
        }
    return out;
}

namespace {

double off_diagonal_norm2(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

// Applies the unitary U = D R on columns p, q of `a` (and rows, as U^dagger)
// where D = diag(1, e^{-i phi}) turns the pivot real and R is the classical
// real Jacobi rotation.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const Complex phase = apq / mag;  // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    // U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    const Complex u00 = c;
    const Complex u01 = s;
    const Complex u10 = -s * std::conj(phase);
    const Complex u11 = c * std::conj(phase);

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * u00 + akq * u10;
        a(k, q) = akp * u01 + akq * u11;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(u00) * apk + std::conj(u10) * aqk;
        a(q, k) = std::conj(u01) * apk + std::conj(u11) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * u00 + vkq * u10;
        v(k, q) = vkp * u01 + vkq * u11;
    }
}

}  // namespace

EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& h, const JacobiOptions& options) {
    if (!h.is_square()) throw PreconditionError("hermitian_eigendecompose: matrix is not square");
    const double scale = h.max_abs();
    const double defect = h.hermiticity_defect();
    if (defect > 1e-10 * std::max(1.0, scale)) {
        throw PreconditionError("hermitian_eigendecompose: matrix is not Hermitian (defect " + std::to_string(defect) +
                                ")");
    }
    const std::size_t n = h.rows();
    ComplexMatrix a = h;
    // Symmetrize away sub-tolerance asymmetry so the rotations stay exact.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    double total = 0.0;
    for (const auto& z : a.entries()) total += std::norm(z);
    const double target = options.relative_tolerance * options.relative_tolerance * std::max(total, 1e-300);

    bool converged = n <= 1 || off_diagonal_norm2(a) <= target;
    for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                // Skip entries already negligible against both diagonals.
                const double dp = std::abs(a(p, p).real());
                const double dq = std::abs(a(q, q).real());
                if (sweep > 3 && dp + 100.0 * mag == dp && dq + 100.0 * mag == dq) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                rotate(a, v, p, q);
            }
        converged = off_diagonal_norm2(a) <= target;
    }
    if (!converged) {
        throw NumericalError("hermitian_eigendecompose: no convergence after " + std::to_string(options.max_sweeps) +
                             " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = a(src, src).real();
        std::size_t big = 0;
        double bigmag = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(v(i, src));
            if (m > bigmag * (1.0 + 1e-12)) {
                bigmag = m;
                big = i;
            }
        }
        const Complex fix = bigmag > 0.0 ? std::conj(v(big, src)) / bigmag : Complex{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src) * fix;
        out.eigenvectors(big, k) = std::abs(out.eigenvectors(big, k));
    }
    return out;
}

Complex inner(std::span<const Complex> bra, std::span<const Complex> ket) {
    if (bra.size() != ket.size()) throw PreconditionError("inner: length mismatch");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < bra.size(); ++i) acc += std::conj(bra[i]) * ket[i];
    return acc;
}

double norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

void normalize(std::span<Complex> v) {
    const double n = norm(v);
    if (n == 0.0) throw NumericalError("normalize: zero vector");
    for (auto& z : v) z /= n;
}

double fidelity(std::span<const Complex> a, std::span<const Complex> b) { return std::norm(inner(a, b)); }

Complex matrix_element(std::span<const Complex> bra, const ComplexMatrix& m, std::span<const Complex> ket) {
    const CVector mk = m.apply(ket);
    return inner(bra, mk);
}

}  // namespace spinqec
