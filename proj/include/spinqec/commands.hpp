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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spinqec {

struct FieldGrid {
    double start = 1.0;
    double stop = 1.0;
    int points = 1;

    /// Evenly spaced, strictly increasing. Throws PreconditionError otherwise.
    std::vector<double> values() const;
};

/// Options shared by every command. Unused fields are ignored.
struct RunConfig {
    std::string system = "si-sb";
    std::optional<double> hyperfine;
    FieldGrid grid;
    double field = 1.0;
    std::string family;
    std::optional<double> freeze_at;
    std::uint64_t seed = 1;
    int trajectories = 100;
    std::string mode = "full";
    std::string error = "none";
    std::vector<std::string> conditions;
    double half_width = 0.05;
    int cells = 400;
    double error_probability = 1e-3;
    unsigned threads = 0;

    /// Sets a field from its textual key ("bstart", "freeze-at", ...).
    void set(std::string_view key, std::string_view value);
};

/// Energy levels and m_S = -1/2 nuclear transition frequencies over the field grid (CSV).
std::string cmd_levels(const RunConfig& cfg);
/// KL residuals of a code family over the field grid (CSV).
std::string cmd_klsweep(const RunConfig& cfg);
/// Tailoring solve at one field (JSON).
std::string cmd_tailor(const RunConfig& cfg);
/// Zero contours of KL conditions over the distortion angles (CSV).
std::string cmd_contour(const RunConfig& cfg);
/// KL report of a code family at one field (JSON).
std::string cmd_kl(const RunConfig& cfg);
/// Encode / error / detect trajectories (JSON lines, summary last).
std::string cmd_qec(const RunConfig& cfg);
/// Pulse counts and break-even pulse fidelity (JSON).
std::string cmd_budget(const RunConfig& cfg);
/// Ordered pulse lists of every block (JSON lines).
std::string cmd_blocks(const RunConfig& cfg);

/// Dispatch by command name.
std::string run_command(std::string_view command, const RunConfig& cfg);

}  // namespace spinqec
