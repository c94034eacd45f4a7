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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "spinqec.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitNumerical = 3;

int exit_code(spinqec_status st) {
    switch (st) {
        case SPINQEC_OK:
            return kExitOk;
        case SPINQEC_ERR_PRECONDITION:
            return kExitPrecondition;
        default:
            return kExitNumerical;
    }
}

struct Options {
    std::vector<std::pair<std::string, std::string>> values;
    std::string out;
};

void add_option(CLI::App* cmd, Options& opts, const std::string& name, const std::string& help) {
    cmd->add_option_function<std::string>(
        "--" + name, [&opts, name](const std::string& v) { opts.values.emplace_back(name, v); }, help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-qudit error-correction code design and simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", spinqec_version());

    Options opts;
    struct Spec {
        const char* name;
        const char* help;
        std::vector<std::pair<const char*, const char*>> options;
    };
    const std::pair<const char*, const char*> system{"system", "si-sb, si-bi, or a parameter file"};
    const std::pair<const char*, const char*> hyperfine{"hyperfine", "override the hyperfine constant (MHz)"};
    const std::pair<const char*, const char*> bstart{"bstart", "first field point (T)"};
    const std::pair<const char*, const char*> bstop{"bstop", "last field point (T)"};
    const std::pair<const char*, const char*> bpoints{"bpoints", "number of field points"};
    const std::pair<const char*, const char*> field{"field", "field (T)"};
    const std::pair<const char*, const char*> family{"family", "code family, e.g. ideal-7/2, tailored-9/2"};
    const std::pair<const char*, const char*> threads{"threads", "worker threads (0 = all cores)"};
    const std::pair<const char*, const char*> half{"half-width", "search box half width (rad)"};
    const std::pair<const char*, const char*> cells{"cells", "grid cells per side of the search box"};
    const std::pair<const char*, const char*> mode{"mode", "full, z-biased or exact-branch"};

    const std::vector<Spec> specs{
        {"levels", "energy levels and nuclear transition frequencies vs field (CSV)",
         {system, hyperfine, bstart, bstop, bpoints, threads}},
        {"klsweep", "KL residuals of a code family vs field (CSV)",
         {system, hyperfine, bstart, bstop, bpoints, family, {"freeze-at", "freeze the tailored code at this field (T)"},
          threads, half, cells}},
        {"tailor", "solve for the distortion angles at one field (JSON)", {system, hyperfine, field, family, half, cells}},
        {"contour", "zero contours of KL conditions over the distortion angles (CSV)",
         {system, hyperfine, field, family, half, cells, {"conditions", "comma list, e.g. diag-IZ,diag-IXIX"}}},
        {"kl", "KL report of a code family at one field (JSON)", {system, hyperfine, field, family}},
        {"qec", "encode/error/detect trajectories (JSON lines)",
         {mode,
          {"seed", "random seed"},
          {"trajectories", "number of sampled trajectories"},
          {"error", "injected error: none, random, or OP_Q such as XZ_B"},
          threads}},
        {"budget", "pulse counts and break-even pulse fidelity (JSON)",
         {mode, {"error-probability", "per-operator error probability"}}},
        {"blocks", "pulse lists of every synthesized block (JSON lines)", {mode}},
    };
    std::vector<std::pair<CLI::App*, std::string>> commands;
    for (const auto& s : specs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        for (const auto& [name, help] : s.options) add_option(cmd, opts, name, help);
        cmd->add_option("--out", opts.out, "write output to this file instead of stdout");
        commands.emplace_back(cmd, s.name);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitPrecondition;
    }

    std::string command;
    for (const auto& [cmd, name] : commands)
        if (cmd->parsed()) command = name;

    spinqec_config* cfg = nullptr;
    spinqec_status st = spinqec_config_create(&cfg);
    for (const auto& [key, value] : opts.values) {
        if (st != SPINQEC_OK) break;
        st = spinqec_config_set(cfg, key.c_str(), value.c_str());
    }
    char* output = nullptr;
    if (st == SPINQEC_OK) st = spinqec_run(command.c_str(), cfg, &output);
    spinqec_config_free(cfg);
    if (st != SPINQEC_OK) {
        std::cerr << "spinqec " << command << ": " << spinqec_last_error() << "\n";
        return exit_code(st);
    }

    int rc = kExitOk;
    if (opts.out.empty()) {
        std::fputs(output, stdout);
    } else {
        std::ofstream f(opts.out, std::ios::binary);
        f << output;
        if (!f) {
            std::cerr << "spinqec " << command << ": cannot write '" << opts.out << "'\n";
            rc = kExitPrecondition;
        }
    }
    spinqec_string_free(output);
    return rc;
}
