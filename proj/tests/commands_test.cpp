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


#include "spinqec/commands.hpp"

#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "spinqec/error.hpp"

using namespace spinqec;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::size_t columns(const std::string& line) { return std::count(line.begin(), line.end(), ',') + 1; }

}  // namespace

TEST(commands, FieldGrid) {
    FieldGrid g{0.5, 2.0, 4};
    EXPECT_EQ(g.values(), (std::vector<double>{0.5, 1.0, 1.5, 2.0}));
    EXPECT_EQ((FieldGrid{1.0, 1.0, 1}.values()), std::vector<double>{1.0});
    EXPECT_THROW((FieldGrid{2.0, 1.0, 3}.values()), PreconditionError);
    EXPECT_THROW((FieldGrid{1.0, 2.0, 0}.values()), PreconditionError);
}

TEST(commands, ConfigKeys) {
    RunConfig cfg;
    cfg.set("bstart", "0.5");
    cfg.set("freeze-at", "1.25");
    cfg.set("conditions", "diag-IZ,offdiag-IXIX");
    cfg.set("seed", "42");
    EXPECT_DOUBLE_EQ(cfg.grid.start, 0.5);
    EXPECT_DOUBLE_EQ(*cfg.freeze_at, 1.25);
    EXPECT_EQ(cfg.conditions.size(), 2u);
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_THROW(cfg.set("bogus", "1"), PreconditionError);
    EXPECT_THROW(cfg.set("bpoints", "many"), PreconditionError);
}

TEST(commands, LevelsCsv) {
    RunConfig cfg;
    cfg.grid = {0.5, 2.0, 4};
    auto rows = lines_of(cmd_levels(cfg));
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0][0], '#');
    EXPECT_EQ(rows[1].rfind("B_tesla,E_1", 0), 0u);
    EXPECT_EQ(columns(rows[1]), 1u + 16 + 7 + 7 + 1);
    for (std::size_t k = 2; k < rows.size(); ++k) EXPECT_EQ(columns(rows[k]), columns(rows[1]));
    // df is zero at the 1 T reference.
    auto cells = rows[3];
    EXPECT_EQ(cells.rfind("1,", 0), 0u);
    EXPECT_NE(cells.find(",0,0,0,0,0,0,0,ok"), std::string::npos);
}

TEST(commands, KlSweepAndDeterminism) {
    RunConfig cfg;
    cfg.grid = {0.5, 5.0, 4};
    cfg.family = "ideal-7/2";
    const std::string a = cmd_klsweep(cfg);
    cfg.threads = 1;
    const std::string b = cmd_klsweep(cfg);
    EXPECT_EQ(a, b);
    auto rows = lines_of(a);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(columns(rows[1]), 13u);
}

TEST(commands, TailorJson) {
    RunConfig cfg;
    cfg.system = "si-bi";
    cfg.family = "tailored-9/2";
    auto j = nlohmann::json::parse(cmd_tailor(cfg));
    EXPECT_NEAR(j["eps1_rad"].get<double>(), -0.002396351951977, 1e-10);
    EXPECT_EQ(j["amplitudes"].size(), 4u);
    EXPECT_TRUE(j.contains("runtime_s"));
    EXPECT_LT(j["kl_max"].get<double>(), 1e-10);
}

TEST(commands, ContourRows) {
    RunConfig cfg;
    cfg.system = "si-bi";
    cfg.family = "tailored-9/2";
    cfg.cells = 100;
    auto rows = lines_of(cmd_contour(cfg));
    std::size_t intersections = 0;
    for (const auto& r : rows)
        if (r.rfind("intersection,", 0) == 0) ++intersections;
    EXPECT_EQ(intersections, 1u);
}

TEST(commands, QecTrajectoriesAreDeterministic) {
    RunConfig cfg;
    cfg.error = "X_B";
    cfg.trajectories = 5;
    cfg.seed = 9;
    const std::string a = cmd_qec(cfg);
    EXPECT_EQ(a, cmd_qec(cfg));
    auto rows = lines_of(a);
    ASSERT_EQ(rows.size(), 6u);
    auto summary = nlohmann::json::parse(rows.back())["summary"];
    EXPECT_EQ(summary["uncorrectable"].get<int>(), 0);
    EXPECT_GT(summary["mean_fidelity"].get<double>(), 1.0 - 1e-9);
}

TEST(commands, Budget) {
    RunConfig cfg;
    auto j = nlohmann::json::parse(cmd_budget(cfg));
    EXPECT_TRUE(j.contains("counting_rule"));
    EXPECT_TRUE(j.contains("full"));
    EXPECT_TRUE(j.contains("z-biased"));
}

TEST(commands, UnknownCommand) {
    EXPECT_THROW(run_command("frobnicate", RunConfig{}), PreconditionError);
}
