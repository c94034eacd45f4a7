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


#include "spinqec.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "gtest/gtest.h"

TEST(capi, Version) { EXPECT_GT(std::strlen(spinqec_version()), 0u); }

TEST(capi, SystemLifecycle) {
    spinqec_system* sys = nullptr;
    ASSERT_EQ(spinqec_system_create("si-sb", &sys), SPINQEC_OK);
    size_t dim = 0;
    ASSERT_EQ(spinqec_system_dimension(sys, &dim), SPINQEC_OK);
    EXPECT_EQ(dim, 16u);

    std::vector<double> e(4);
    size_t count = 0;
    EXPECT_EQ(spinqec_energy_levels(sys, 1.0, e.data(), e.size(), &count), SPINQEC_ERR_PRECONDITION);
    EXPECT_EQ(count, 16u);
    e.resize(count);
    ASSERT_EQ(spinqec_energy_levels(sys, 1.0, e.data(), e.size(), &count), SPINQEC_OK);
    double sum = 0.0;
    for (double v : e) sum += v;
    EXPECT_NEAR(sum, 0.0, 1e-8);

    std::vector<double> f(7);
    ASSERT_EQ(spinqec_transition_frequencies(sys, 1.0, -0.5, f.data(), f.size(), &count), SPINQEC_OK);
    EXPECT_NEAR(f[0], -45.86087301, 1e-7);
    ASSERT_EQ(spinqec_transition_gradients(sys, 1.0, -0.5, f.data(), f.size(), &count), SPINQEC_OK);

    double kl = 0.0;
    ASSERT_EQ(spinqec_kl_max_residual("ideal-7/2", sys, 1.0, 0.0, 0.0, "firstorder-B", &kl), SPINQEC_OK);
    EXPECT_GT(kl, 1e-5);
    ASSERT_EQ(spinqec_system_set_hyperfine(sys, 0.0), SPINQEC_OK);
    ASSERT_EQ(spinqec_kl_max_residual("ideal-7/2", sys, 1.0, 0.0, 0.0, "firstorder-B", &kl), SPINQEC_OK);
    EXPECT_LT(kl, 1e-12);
    spinqec_system_free(sys);
}

TEST(capi, Errors) {
    spinqec_system* sys = nullptr;
    EXPECT_EQ(spinqec_system_create("/no/such/file", &sys), SPINQEC_ERR_PRECONDITION);
    EXPECT_EQ(sys, nullptr);
    EXPECT_GT(std::strlen(spinqec_last_error()), 0u);
    EXPECT_EQ(spinqec_system_create(nullptr, &sys), SPINQEC_ERR_PRECONDITION);
    double kl = 0.0;
    EXPECT_EQ(spinqec_kl_max_residual("ideal-7/2", nullptr, 1.0, 0.1, 0.0, "firstorder-B", &kl),
              SPINQEC_ERR_PRECONDITION);
    spinqec_system_free(nullptr);
}

TEST(capi, Tailor) {
    spinqec_system* sys = nullptr;
    ASSERT_EQ(spinqec_system_create("si-bi", &sys), SPINQEC_OK);
    double e1, e2, amp[4], kl, leftover;
    ASSERT_EQ(spinqec_tailor(sys, "tailored-9/2", 1.0, &e1, &e2, amp, &kl, &leftover), SPINQEC_OK);
    EXPECT_NEAR(e1, -0.002396351951977, 1e-10);
    EXPECT_NEAR(e2, 0.001773512305037, 1e-10);
    EXPECT_NEAR(amp[0] * amp[0] + amp[1] * amp[1], 1.0, 1e-15);
    EXPECT_LT(kl, 1e-10);
    EXPECT_EQ(spinqec_tailor(sys, "ideal-7/2", 1.0, &e1, &e2, amp, &kl, &leftover), SPINQEC_ERR_PRECONDITION);
    spinqec_system_free(sys);
}

TEST(capi, RunCommand) {
    spinqec_config* cfg = nullptr;
    ASSERT_EQ(spinqec_config_create(&cfg), SPINQEC_OK);
    EXPECT_EQ(spinqec_config_set(cfg, "bpoints", "x"), SPINQEC_ERR_PRECONDITION);
    ASSERT_EQ(spinqec_config_set(cfg, "bstart", "1"), SPINQEC_OK);
    ASSERT_EQ(spinqec_config_set(cfg, "bstop", "2"), SPINQEC_OK);
    ASSERT_EQ(spinqec_config_set(cfg, "bpoints", "3"), SPINQEC_OK);
    char* out = nullptr;
    ASSERT_EQ(spinqec_run("levels", cfg, &out), SPINQEC_OK);
    ASSERT_NE(out, nullptr);
    EXPECT_EQ(std::string(out).rfind("# ", 0), 0u);
    spinqec_string_free(out);
    EXPECT_EQ(spinqec_run("nope", cfg, &out), SPINQEC_ERR_PRECONDITION);
    spinqec_config_free(cfg);
}

TEST(capi, Simulator) {
    spinqec_simulator* sim = nullptr;
    ASSERT_EQ(spinqec_simulator_create("z-biased", &sim), SPINQEC_OK);
    int enc = 0, cycle = 0;
    ASSERT_EQ(spinqec_simulator_pulses(sim, &enc, &cycle), SPINQEC_OK);
    EXPECT_GT(cycle, enc);
    double fid, det, unc;
    ASSERT_EQ(spinqec_simulator_run_exact(sim, "ZZ_C", 0.6, 0.0, 0.0, 0.8, &fid, &det, &unc), SPINQEC_OK);
    EXPECT_GT(fid, 1.0 - 1e-9);
    EXPECT_NEAR(det, 1.0, 1e-10);
    EXPECT_LT(unc, 1e-10);
    int detected = 0;
    ASSERT_EQ(spinqec_simulator_run_sampled(sim, "Z_A", 0.6, 0.0, 0.8, 0.0, 7, &detected, &fid), SPINQEC_OK);
    EXPECT_EQ(detected, 1);
    EXPECT_GT(fid, 1.0 - 1e-9);
    EXPECT_EQ(spinqec_simulator_run_exact(sim, "Q_A", 1, 0, 0, 0, &fid, &det, &unc), SPINQEC_ERR_PRECONDITION);
    EXPECT_EQ(spinqec_simulator_run_exact(sim, "I", 1, 0, 1, 0, &fid, &det, &unc), SPINQEC_ERR_PRECONDITION);
    spinqec_simulator_free(sim);

    double inf = 0.0;
    ASSERT_EQ(spinqec_fidelity_threshold(1700, 1e-3, &inf), SPINQEC_OK);
    EXPECT_GT(inf, 1e-6);
    EXPECT_LT(inf, 1e-4);
    EXPECT_EQ(spinqec_fidelity_threshold(0, 1e-3, &inf), SPINQEC_ERR_PRECONDITION);
}
