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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <cstring>
#include <string>

#include "spinqec/codeword.hpp"
#include "spinqec/commands.hpp"
#include "spinqec/error.hpp"
#include "spinqec/qec_sim.hpp"
#include "spinqec/spin_model.hpp"
#include "spinqec/tailor.hpp"

struct spinqec_system {
    spinqec::SpinSystem sys;
};

struct spinqec_config {
    spinqec::RunConfig cfg;
};

struct spinqec_simulator {
    spinqec::QecSimulator sim;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
spinqec_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return SPINQEC_OK;
    } catch (const spinqec::LabelingError& e) {
        g_last_error = e.what();
        return SPINQEC_ERR_LABELING;
    } catch (const spinqec::NumericalError& e) {
        g_last_error = e.what();
        return SPINQEC_ERR_NUMERICAL;
    } catch (const spinqec::PreconditionError& e) {
        g_last_error = e.what();
        return SPINQEC_ERR_PRECONDITION;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SPINQEC_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SPINQEC_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (!p) throw spinqec::PreconditionError(std::string(what) + " must not be null");
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

spinqec_status fill(const std::vector<double>& values, double* out, size_t capacity, size_t* count) {
    *count = values.size();
    if (capacity < values.size() || (!out && !values.empty())) {
        g_last_error = "output buffer too small: need " + std::to_string(values.size());
        return SPINQEC_ERR_PRECONDITION;
    }
    std::copy(values.begin(), values.end(), out);
    return SPINQEC_OK;
}

}  // namespace

extern "C" {

const char* spinqec_version(void) { return "0.1.0"; }

const char* spinqec_last_error(void) { return g_last_error.c_str(); }

void spinqec_string_free(char* s) { std::free(s); }

spinqec_status spinqec_system_create(const char* name_or_path, spinqec_system** out) {
    return guarded([&] {
        require(name_or_path, "name_or_path");
        require(out, "out");
        *out = new spinqec_system{spinqec::SpinSystem::resolve(name_or_path)};
    });
}

void spinqec_system_free(spinqec_system* sys) { delete sys; }

spinqec_status spinqec_system_set_hyperfine(spinqec_system* sys, double a_mhz) {
    return guarded([&] {
        require(sys, "sys");
        if (!std::isfinite(a_mhz)) throw spinqec::PreconditionError("hyperfine constant must be finite");
        sys->sys.hyperfine = a_mhz;
    });
}

spinqec_status spinqec_system_dimension(const spinqec_system* sys, size_t* out) {
    return guarded([&] {
        require(sys, "sys");
        require(out, "out");
        *out = sys->sys.dim();
    });
}

spinqec_status spinqec_energy_levels(const spinqec_system* sys, double b_z, double* out, size_t capacity,
                                     size_t* count) {
    spinqec_status st = SPINQEC_OK;
    spinqec_status g = guarded([&] {
        require(sys, "sys");
        require(count, "count");
        std::vector<double> e;
        for (const auto& s : spinqec::dressed_eigenstates(sys->sys, spinqec::Field::axial(b_z))) e.push_back(s.energy);
        st = fill(e, out, capacity, count);
    });
    return g != SPINQEC_OK ? g : st;
}

spinqec_status spinqec_transition_frequencies(const spinqec_system* sys, double b_z, double m_s, double* out,
                                              size_t capacity, size_t* count) {
    spinqec_status st = SPINQEC_OK;
    spinqec_status g = guarded([&] {
        require(sys, "sys");
        require(count, "count");
        st = fill(spinqec::nuclear_transition_frequencies(sys->sys, b_z, m_s), out, capacity, count);
    });
    return g != SPINQEC_OK ? g : st;
}

spinqec_status spinqec_transition_gradients(const spinqec_system* sys, double b_z, double m_s, double* out,
                                            size_t capacity, size_t* count) {
    spinqec_status st = SPINQEC_OK;
    spinqec_status g = guarded([&] {
        require(sys, "sys");
        require(count, "count");
        st = fill(spinqec::transition_frequency_gradients(sys->sys, b_z, m_s), out, capacity, count);
    });
    return g != SPINQEC_OK ? g : st;
}

spinqec_status spinqec_kl_max_residual(const char* family, const spinqec_system* sys, double b_z, double eps1,
                                       double eps2, const char* error_set, double* out) {
    return guarded([&] {
        require(family, "family");
        require(error_set, "error_set");
        require(out, "out");
        const spinqec::CodeFamily f = spinqec::parse_family(family);
        spinqec::ErrorSetKind kind;
        if (std::strcmp(error_set, "firstorder-B") == 0) {
            kind = spinqec::ErrorSetKind::FirstOrderB;
        } else if (std::strcmp(error_set, "firstorder-EB") == 0) {
            kind = spinqec::ErrorSetKind::FirstOrderEB;
        } else {
            throw spinqec::PreconditionError(std::string("unknown error set '") + error_set + "'");
        }
        const spinqec::CodeWord cw = sys ? spinqec::make_dressed_codeword(f, sys->sys, spinqec::Field::axial(b_z), eps1, eps2)
                                         : spinqec::make_codeword(f, eps1, eps2);
        *out = spinqec::kl_residuals(cw, spinqec::error_set_for(cw, kind)).max_residual;
    });
}

spinqec_status spinqec_tailor(const spinqec_system* sys, const char* family, double b_z, double* eps1, double* eps2,
                              double amplitudes[4], double* kl_max, double* leftover) {
    return guarded([&] {
        require(sys, "sys");
        require(family, "family");
        const spinqec::TailoringSolution sol = spinqec::solve_tailoring(spinqec::parse_family(family), sys->sys, b_z);
        if (eps1) *eps1 = sol.eps1;
        if (eps2) *eps2 = sol.eps2;
        if (amplitudes) {
            const double t0 = sol.codeword.theta0;
            amplitudes[0] = std::cos(t0 + sol.eps1);
            amplitudes[1] = std::sin(t0 + sol.eps1);
            amplitudes[2] = std::cos(t0 + sol.eps2);
            amplitudes[3] = std::sin(t0 + sol.eps2);
        }
        if (kl_max) *kl_max = sol.kl_max;
        if (leftover) *leftover = sol.leftover;
    });
}

spinqec_status spinqec_config_create(spinqec_config** out) {
    return guarded([&] {
        require(out, "out");
        *out = new spinqec_config{};
    });
}

void spinqec_config_free(spinqec_config* cfg) { delete cfg; }

spinqec_status spinqec_config_set(spinqec_config* cfg, const char* key, const char* value) {
    return guarded([&] {
        require(cfg, "cfg");
        require(key, "key");
        require(value, "value");
        cfg->cfg.set(key, value);
    });
}

spinqec_status spinqec_run(const char* command, const spinqec_config* cfg, char** output) {
    return guarded([&] {
        require(command, "command");
        require(cfg, "cfg");
        require(output, "output");
        *output = nullptr;
        *output = copy_string(spinqec::run_command(command, cfg->cfg));
    });
}

spinqec_status spinqec_simulator_create(const char* mode, spinqec_simulator** out) {
    return guarded([&] {
        require(mode, "mode");
        require(out, "out");
        spinqec::DecoderMode dm;
        if (std::strcmp(mode, "full") == 0) {
            dm = spinqec::DecoderMode::Full;
        } else if (std::strcmp(mode, "z-biased") == 0) {
            dm = spinqec::DecoderMode::ZBiased;
        } else {
            throw spinqec::PreconditionError(std::string("unknown decoder mode '") + mode + "'");
        }
        *out = new spinqec_simulator{spinqec::QecSimulator(dm)};
    });
}

void spinqec_simulator_free(spinqec_simulator* sim) { delete sim; }

spinqec_status spinqec_simulator_pulses(const spinqec_simulator* sim, int* encode, int* cycle) {
    return guarded([&] {
        require(sim, "sim");
        const spinqec::PulseBudget b = sim->sim.pulse_budget();
        if (encode) *encode = b.encode;
        if (cycle) *cycle = b.cycle;
    });
}

spinqec_status spinqec_simulator_run_exact(const spinqec_simulator* sim, const char* error, double alpha_re,
                                           double alpha_im, double beta_re, double beta_im, double* min_fidelity,
                                           double* detected_weight, double* uncorrectable_weight) {
    return guarded([&] {
        require(sim, "sim");
        require(error, "error");
        const spinqec::Complex a{alpha_re, alpha_im}, b{beta_re, beta_im};
        spinqec::QuditRegister reg = sim->sim.encode(a, b);
        spinqec::apply_error(reg, spinqec::ErrorEvent::parse(error));
        const spinqec::BranchResult r = sim->sim.detect_exact(reg, a, b);
        double fmin = 1.0, w = 0.0;
        for (const auto& br : r.branches) {
            fmin = std::min(fmin, br.logical_fidelity);
            w += br.weight;
        }
        if (min_fidelity) *min_fidelity = r.branches.empty() ? 0.0 : fmin;
        if (detected_weight) *detected_weight = w;
        if (uncorrectable_weight) *uncorrectable_weight = r.uncorrectable_weight;
    });
}

spinqec_status spinqec_simulator_run_sampled(const spinqec_simulator* sim, const char* error, double alpha_re,
                                             double alpha_im, double beta_re, double beta_im, uint64_t seed,
                                             int* detected, double* fidelity) {
    return guarded([&] {
        require(sim, "sim");
        require(error, "error");
        const spinqec::Complex a{alpha_re, alpha_im}, b{beta_re, beta_im};
        spinqec::QuditRegister reg = sim->sim.encode(a, b);
        spinqec::apply_error(reg, spinqec::ErrorEvent::parse(error));
        std::mt19937_64 rng(seed);
        const spinqec::SyndromeRecord r = sim->sim.detect_sampled(reg, a, b, rng);
        if (detected) *detected = r.detected ? 1 : 0;
        if (fidelity) *fidelity = r.logical_fidelity;
    });
}

spinqec_status spinqec_fidelity_threshold(int pulses, double error_probability, double* max_infidelity) {
    return guarded([&] {
        require(max_infidelity, "max_infidelity");
        spinqec::ThresholdModel m;
        m.error_probability = error_probability;
        *max_infidelity = spinqec::fidelity_threshold(pulses, m).max_pulse_infidelity;
    });
}

}  // extern "C"
