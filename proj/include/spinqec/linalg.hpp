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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spinqec {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Complex> entries() const { return data_; }
    std::span<Complex> entries() { return data_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    /// Largest elementwise modulus.
    double max_abs() const;
    /// max |M - M^dagger| elementwise; 0 for a Hermitian matrix.
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const { return is_square() && hermiticity_defect() < tol; }

    CVector apply(std::span<const Complex> v) const;
    std::vector<Complex> column(std::size_t c) const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// max |A - B| elementwise. Shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; (A kron B)(C kron D) = AC kron BD.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigenpairs of a Hermitian matrix.
///
/// Eigenvalues are ascending. Column k of `eigenvectors` belongs to
/// eigenvalue k and is phase-fixed so that its largest-modulus component is
/// real and positive. Within a degenerate eigenspace the basis is whatever
/// the rotations produced; callers must not rely on it.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    CVector vector(std::size_t k) const { return eigenvectors.column(k); }
    /// V diag(lambda) V^dagger.
    ComplexMatrix reconstruct() const;
};

struct JacobiOptions {
    int max_sweeps = 100;
    double relative_tolerance = 1e-15;
};

/// Cyclic complex Jacobi eigensolver.
///
/// Throws PreconditionError for non-square or non-Hermitian input (defect
/// above 1e-10 relative to max|H|, floor 1e-10) and NumericalError if the
/// off-diagonal mass has not collapsed after `max_sweeps` sweeps.
EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& h, const JacobiOptions& options = {});

// State-vector helpers.
Complex inner(std::span<const Complex> bra, std::span<const Complex> ket);
double norm(std::span<const Complex> v);
void normalize(std::span<Complex> v);
/// |<a|b>|^2 for normalized inputs.
double fidelity(std::span<const Complex> a, std::span<const Complex> b);
/// <a| M |b> computed as a dot product against M|b>.
Complex matrix_element(std::span<const Complex> bra, const ComplexMatrix& m, std::span<const Complex> ket);

}  // namespace spinqec
