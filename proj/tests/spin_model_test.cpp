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


#include "spinqec/spin_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gtest/gtest.h"
#include "spinqec/error.hpp"

using namespace spinqec;

TEST(spin_model, SpinParsing) {
    EXPECT_EQ(Spin::parse("7/2").twice, 7);
    EXPECT_EQ(Spin::parse("3.5").twice, 7);
    EXPECT_EQ(Spin::parse("1").twice, 2);
    EXPECT_THROW(Spin::parse("7/3"), PreconditionError);
    EXPECT_THROW(Spin::parse("-1/2"), PreconditionError);
    EXPECT_EQ(Spin::parse("9/2").dim(), 10u);
    EXPECT_EQ(Spin::parse("7/2").index_of(-3.5), 0u);
    EXPECT_EQ(Spin::parse("7/2").index_of(3.5), 7u);
    EXPECT_THROW(Spin::parse("7/2").index_of(4.5), PreconditionError);
}

TEST(spin_model, LadderMatrixElements) {
    Spin j = Spin::parse("7/2");
    auto ops = spin_operators(j);
    EXPECT_NEAR(ops.x(j.index_of(-2.5), j.index_of(-3.5)).real(), std::sqrt(7.0) / 2.0, 1e-15);
    ComplexMatrix xx = ops.x * ops.x;
    EXPECT_NEAR(xx(0, 0).real(), 7.0 / 4.0, 1e-14);
    EXPECT_NEAR(xx(j.index_of(-2.5), j.index_of(-2.5)).real(), 19.0 / 4.0, 1e-14);
    EXPECT_NEAR(xx(j.index_of(-0.5), j.index_of(-0.5)).real(), 31.0 / 4.0, 1e-14);
    EXPECT_NEAR(xx(j.index_of(1.5), j.index_of(1.5)).real(), 27.0 / 4.0, 1e-14);
}

TEST(spin_model, CommutationRelations) {
    for (int twice = 1; twice <= 23; ++twice) {
        Spin j{twice};
        auto s = spin_operators(j);
        const Complex i{0.0, 1.0};
        EXPECT_LT(max_abs_diff(commutator(s.x, s.y), s.z * i), 1e-12) << twice;
        EXPECT_LT(max_abs_diff(commutator(s.y, s.z), s.x * i), 1e-12) << twice;
        EXPECT_LT(max_abs_diff(commutator(s.z, s.x), s.y * i), 1e-12) << twice;
        ComplexMatrix casimir = s.x * s.x + s.y * s.y + s.z * s.z;
        const double jj = j.value() * (j.value() + 1.0);
        EXPECT_LT(max_abs_diff(casimir, ComplexMatrix::identity(j.dim()) * Complex{jj}), 1e-11) << twice;
    }
}

TEST(spin_model, HamiltonianIsTraceless) {
    auto h = build_hamiltonian(SpinSystem::preset("si-sb"), Field{0.3, -0.2, 1.0});
    EXPECT_TRUE(h.is_hermitian());
    EXPECT_NEAR(std::abs(h.trace()), 0.0, 1e-9);
    EXPECT_EQ(h.rows(), 16u);
}

TEST(spin_model, ZeemanLimitWithoutHyperfine) {
    SpinSystem sys = SpinSystem::preset("si-sb");
    sys.hyperfine = 0.0;
    auto states = dressed_eigenstates(sys, Field::axial(1.0));
    for (const auto& s : states) {
        EXPECT_NEAR(s.dominant_weight, 1.0, 1e-14);
        EXPECT_NEAR(s.energy, sys.g_e * s.label.m_s + sys.g_n * s.label.m_i, 1e-9);
    }
}

TEST(spin_model, BismuthGroundEnergy) {
    auto states = dressed_eigenstates(SpinSystem::preset("Si:Bi-209"), Field::axial(1.0));
    EXPECT_EQ(states.size(), 20u);
    EXPECT_NEAR(states.front().energy, -17442.671079316, 1e-6);
}

TEST(spin_model, HighFieldStatesArePure) {
    auto sys = SpinSystem::preset("si-sb");
    for (const auto& s : dressed_eigenstates(sys, Field::axial(100.0))) EXPECT_GT(s.dominant_weight, 0.9999);
    auto one = dressed_eigenstates(sys, Field::axial(1.0));
    EXPECT_NEAR(find_state(one, {-0.5, -3.5}).dominant_weight, 1.0, 1e-14);
    EXPECT_NEAR(find_state(one, {-0.5, 3.5}).dominant_weight, 0.9999775117410846, 1e-10);
}

TEST(spin_model, AntimonyTransitionFrequencies) {
    auto sys = SpinSystem::preset("si-sb");
    const std::vector<double> down{-45.86087301, -45.67081803, -45.48285537, -45.29694692,
                                   -45.11305553, -44.93114500, -44.75118001};
    const std::vector<double> up{56.77081803, 56.58285537, 56.39694692, 56.21305553,
                                 56.03114500, 55.85118001, 55.67312613};
    auto f = nuclear_transition_frequencies(sys, 1.0, -0.5);
    auto g = nuclear_transition_frequencies(sys, 1.0, 0.5);
    ASSERT_EQ(f.size(), 7u);
    for (std::size_t k = 0; k < 7; ++k) {
        EXPECT_NEAR(f[k], down[k], 1e-7);
        EXPECT_NEAR(g[k], up[k], 1e-7);
    }
    EXPECT_THROW(nuclear_transition_frequencies(sys, 1.0, 1.5), PreconditionError);
}

TEST(spin_model, GradientsAreDistinctAndSpreadShrinks) {
    auto sys = SpinSystem::preset("si-sb");
    double last = 1e300;
    for (double b : {1.0, 2.0, 5.0, 10.0, 50.0}) {
        auto g = transition_frequency_gradients(sys, b, -0.5);
        for (std::size_t k = 1; k < g.size(); ++k) EXPECT_GT(std::abs(g[k] - g[k - 1]), 0.0) << b;
        auto [lo, hi] = std::minmax_element(g.begin(), g.end());
        const double spread = *hi - *lo;
        EXPECT_LT(spread, last) << b;
        last = spread;
    }
    EXPECT_THROW(transition_frequency_gradients(sys, 1.0, -0.5, 0.0), PreconditionError);
}

TEST(spin_model, ParameterFile) {
    auto sys = SpinSystem::parse(
        "# custom donor\n"
        "name = test\n"
        "S = 1/2\n"
        "I = 9/2\n"
        "g_e_MHz_per_T = 28020\n"
        "g_n_MHz_per_T = 6.841\n"
        "A_MHz = 1475.4\n");
    EXPECT_EQ(sys.name, "test");
    EXPECT_EQ(sys.nucleus.twice, 9);
    EXPECT_EQ(sys.dim(), 20u);
    auto bi = SpinSystem::preset("si-bi");
    EXPECT_LT(max_abs_diff(build_hamiltonian(sys, Field::axial(1.0)), build_hamiltonian(bi, Field::axial(1.0))),
              1e-9);
    EXPECT_THROW(SpinSystem::parse("S = 1/2\nbogus = 3\n"), PreconditionError);
    EXPECT_THROW(SpinSystem::resolve("/nonexistent/donor.txt"), PreconditionError);

    const std::string path = ::testing::TempDir() + "donor.txt";
    std::ofstream(path) << "S = 1/2\nI = 7/2\ng_e_MHz_per_T = 28020\ng_n_MHz_per_T = 5.55\nA_MHz = 101.52\n";
    EXPECT_EQ(SpinSystem::resolve(path).nucleus.twice, 7);
    std::remove(path.c_str());
}
