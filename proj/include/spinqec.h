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

/* C interface to the spinqec library.
 *
 * Every function returns a spinqec_status. On failure the message is
 * available from spinqec_last_error() on the calling thread until the next
 * call. Strings returned through `char**` are owned by the caller and must
 * be released with spinqec_string_free().
 */
#ifndef SPINQEC_H
#define SPINQEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SPINQEC_BUILDING_LIBRARY)
#define SPINQEC_API __declspec(dllexport)
#else
#define SPINQEC_API __declspec(dllimport)
#endif
#else
#define SPINQEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spinqec_status {
    SPINQEC_OK = 0,
    SPINQEC_ERR_PRECONDITION = 2,
    SPINQEC_ERR_NUMERICAL = 3,
    SPINQEC_ERR_LABELING = 4,
    SPINQEC_ERR_INTERNAL = 5
} spinqec_status;

typedef struct spinqec_system spinqec_system;
typedef struct spinqec_config spinqec_config;
typedef struct spinqec_simulator spinqec_simulator;

SPINQEC_API const char* spinqec_version(void);
SPINQEC_API const char* spinqec_last_error(void);
SPINQEC_API void spinqec_string_free(char* s);

/* Spin systems: "si-sb", "si-bi" or a key-value parameter file. */
SPINQEC_API spinqec_status spinqec_system_create(const char* name_or_path, spinqec_system** out);
SPINQEC_API void spinqec_system_free(spinqec_system* sys);
SPINQEC_API spinqec_status spinqec_system_set_hyperfine(spinqec_system* sys, double a_mhz);
SPINQEC_API spinqec_status spinqec_system_dimension(const spinqec_system* sys, size_t* out);

/* Eigenvalues (MHz, ascending) at axial field b_z. `count` receives the
 * number written, or the number required when `capacity` is too small. */
SPINQEC_API spinqec_status spinqec_energy_levels(const spinqec_system* sys, double b_z, double* out, size_t capacity,
                                                 size_t* count);
SPINQEC_API spinqec_status spinqec_transition_frequencies(const spinqec_system* sys, double b_z, double m_s,
                                                          double* out, size_t capacity, size_t* count);
SPINQEC_API spinqec_status spinqec_transition_gradients(const spinqec_system* sys, double b_z, double m_s,
                                                        double* out, size_t capacity, size_t* count);

/* Largest KL residual of a code family. `sys` may be NULL for the bare |m>
 * basis; `error_set` is "firstorder-B" or "firstorder-EB". */
SPINQEC_API spinqec_status spinqec_kl_max_residual(const char* family, const spinqec_system* sys, double b_z,
                                                   double eps1, double eps2, const char* error_set, double* out);

/* Tailoring solve. `amplitudes` receives cos/sin of (theta0 + eps1) and
 * (theta0 + eps2); `leftover` the |<0_L|I_X I_Y|1_L>| residual. */
SPINQEC_API spinqec_status spinqec_tailor(const spinqec_system* sys, const char* family, double b_z, double* eps1,
                                          double* eps2, double amplitudes[4], double* kl_max, double* leftover);

/* Command runner used by the CLI. Keys match the CLI long options. */
SPINQEC_API spinqec_status spinqec_config_create(spinqec_config** out);
SPINQEC_API void spinqec_config_free(spinqec_config* cfg);
SPINQEC_API spinqec_status spinqec_config_set(spinqec_config* cfg, const char* key, const char* value);
SPINQEC_API spinqec_status spinqec_run(const char* command, const spinqec_config* cfg, char** output);

/* Three-qudit QEC simulator. mode: "full" or "z-biased". */
SPINQEC_API spinqec_status spinqec_simulator_create(const char* mode, spinqec_simulator** out);
SPINQEC_API void spinqec_simulator_free(spinqec_simulator* sim);
SPINQEC_API spinqec_status spinqec_simulator_pulses(const spinqec_simulator* sim, int* encode, int* cycle);
/* Exact-branch cycle: minimum fidelity over branches, their total weight,
 * and the weight left undetected. */
SPINQEC_API spinqec_status spinqec_simulator_run_exact(const spinqec_simulator* sim, const char* error, double alpha_re,
                                                       double alpha_im, double beta_re, double beta_im,
                                                       double* min_fidelity, double* detected_weight,
                                                       double* uncorrectable_weight);
/* Sampled cycle; `detected` is 0 when no case fired. */
SPINQEC_API spinqec_status spinqec_simulator_run_sampled(const spinqec_simulator* sim, const char* error,
                                                         double alpha_re, double alpha_im, double beta_re,
                                                         double beta_im, uint64_t seed, int* detected,
                                                         double* fidelity);

SPINQEC_API spinqec_status spinqec_fidelity_threshold(int pulses, double error_probability, double* max_infidelity);

#ifdef __cplusplus
}
#endif

#endif /* SPINQEC_H */
