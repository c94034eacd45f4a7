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

#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "spinqec/error.hpp"

using namespace spinqec;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = {g(rng), g(rng)};
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

}  // namespace

TEST(linalg, DiagonalInputIsSortedAscending) {
    const double vals[] = {3.0, -1.0, 2.0};
    auto eig = hermitian_eigendecompose(ComplexMatrix::diagonal(vals));
    EXPECT_EQ(eig.eigenvalues, (std::vector<double>{-1.0, 2.0, 3.0}));
    EXPECT_NEAR(std::abs(eig.eigenvectors(1, 0)), 1.0, 1e-15);
}

TEST(linalg, PauliX) {
    ComplexMatrix x(2, 2, {0.0, 1.0, 1.0, 0.0});
    auto eig = hermitian_eigendecompose(x);
    EXPECT_NEAR(eig.eigenvalues[0], -1.0, 1e-14);
    EXPECT_NEAR(eig.eigenvalues[1], 1.0, 1e-14);
    EXPECT_LT(max_abs_diff(eig.reconstruct(), x), 1e-14);
}

TEST(linalg, LargestComponentIsRealPositive) {
    std::mt19937_64 rng(7);
    auto eig = hermitian_eigendecompose(random_hermitian(12, rng));
    for (std::size_t k = 0; k < 12; ++k) {
        auto v = eig.vector(k);
        auto it = std::max_element(v.begin(), v.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
        EXPECT_GT(it->real(), 0.0);
        EXPECT_NEAR(it->imag(), 0.0, 1e-15);
    }
}

TEST(linalg, AgreesWithEigenUpToDim64) {
    std::mt19937_64 rng(2024);
    for (std::size_t n : {1, 2, 3, 5, 8, 16, 31, 64}) {
        ComplexMatrix h = random_hermitian(n, rng);
        auto eig = hermitian_eigendecompose(h);
        Eigen::MatrixXcd e(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) e(i, j) = h(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(e);
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(eig.eigenvalues[k], ref.eigenvalues()(k), 1e-10) << n;
        EXPECT_LT(max_abs_diff(eig.reconstruct(), h), 1e-10);
        ComplexMatrix vv = eig.eigenvectors.adjoint() * eig.eigenvectors;
        EXPECT_LT(max_abs_diff(vv, ComplexMatrix::identity(n)), 1e-12);
    }
}

TEST(linalg, DegenerateSpectrum) {
    const double vals[] = {1.0, 1.0, 1.0, -2.0};
    std::mt19937_64 rng(3);
    ComplexMatrix q = hermitian_eigendecompose(random_hermitian(4, rng)).eigenvectors;
    ComplexMatrix h = q * ComplexMatrix::diagonal(vals) * q.adjoint();
    auto eig = hermitian_eigendecompose(h);
    EXPECT_NEAR(eig.eigenvalues[0], -2.0, 1e-13);
    EXPECT_NEAR(eig.eigenvalues[3], 1.0, 1e-13);
    EXPECT_LT(max_abs_diff(eig.reconstruct(), h), 1e-12);
}

TEST(linalg, RejectsNonHermitian) {
    ComplexMatrix m(2, 2, {0.0, 1.0, 0.0, 0.0});
    EXPECT_THROW(hermitian_eigendecompose(m), PreconditionError);
    EXPECT_THROW(hermitian_eigendecompose(ComplexMatrix(2, 3)), PreconditionError);
}

TEST(linalg, KronMixedProduct) {
    std::mt19937_64 rng(11);
    ComplexMatrix a = random_hermitian(2, rng), b = random_hermitian(3, rng);
    ComplexMatrix c = random_hermitian(2, rng), d = random_hermitian(3, rng);
    EXPECT_LT(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)), 1e-12);
    EXPECT_EQ(kron(a, b).rows(), 6u);
    EXPECT_NEAR(std::abs(kron(a, b).trace() - a.trace() * b.trace()), 0.0, 1e-12);
}

TEST(linalg, VectorHelpers) {
    CVector v{{3.0, 0.0}, {0.0, 4.0}};
    EXPECT_DOUBLE_EQ(norm(v), 5.0);
    normalize(v);
    EXPECT_NEAR(norm(v), 1.0, 1e-15);
    CVector w{{0.0, 1.0}, {0.0, 0.0}};
    EXPECT_NEAR(std::abs(inner(w, v) - Complex(0.0, -0.6)), 0.0, 1e-15);
    EXPECT_NEAR(fidelity(v, v), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(matrix_element(v, ComplexMatrix::identity(2), v) - 1.0), 0.0, 1e-15);
}
