/* Copyright 2026 The DCLS Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the DCLS library. Every function returns a dcls_status;
 * on failure dcls_last_error() describes the most recent error raised on the
 * calling thread. Handles are opaque and owned by the caller. */

#ifndef DCLS_H_
#define DCLS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DCLS_API __declspec(dllexport)
#elif defined(DCLS_BUILDING_LIBRARY)
#define DCLS_API __attribute__((visibility("default")))
#else
#define DCLS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dcls_status {
  DCLS_OK = 0,
  DCLS_ERR_INVALID_ARGUMENT = 1,
  DCLS_ERR_SHAPE_MISMATCH = 2,
  DCLS_ERR_NON_FINITE = 3,
  DCLS_ERR_IO = 4,
  DCLS_ERR_FORMAT = 5,
  DCLS_ERR_CONFIG = 6,
  DCLS_ERR_MISSING_CACHE = 7,
  DCLS_ERR_THRESHOLD = 8,
  DCLS_ERR_INTERNAL = 9
} dcls_status;

typedef enum dcls_interp {
  DCLS_INTERP_BILINEAR = 0,
  DCLS_INTERP_TRIANGLE = 1,
  DCLS_INTERP_GAUSS = 2
} dcls_interp;

typedef struct dcls_config dcls_config;
typedef struct dcls_kernel dcls_kernel;

/* Message for the last failure on this thread; "" if none. */
DCLS_API const char* dcls_last_error(void);
DCLS_API const char* dcls_status_name(dcls_status status);
DCLS_API const char* dcls_version(void);

DCLS_API dcls_status dcls_set_num_threads(int threads);

/* Interpolation value at offset x with raw sigma. */
DCLS_API dcls_status dcls_interp_eval(dcls_interp kind, double x,
                                      double sigma_raw, double* out);

/* ---- run configuration ---- */

DCLS_API dcls_status dcls_config_create(dcls_config** out);
DCLS_API void dcls_config_destroy(dcls_config* config);
/* Replaces the configuration with the parsed contents of a file. */
DCLS_API dcls_status dcls_config_load_file(dcls_config* config,
                                           const char* path);
/* "section.key=value" or "key=value" for top-level keys. */
DCLS_API dcls_status dcls_config_set(dcls_config* config,
                                     const char* assignment);
/* Copies the value of `key` into buf (NUL-terminated). *needed receives the
 * required size including the terminator; buf may be NULL to query it. */
DCLS_API dcls_status dcls_config_get(const dcls_config* config,
                                     const char* key, char* buf, size_t size,
                                     size_t* needed);
/* Full serialized text, same buffer protocol as dcls_config_get. */
DCLS_API dcls_status dcls_config_serialize(const dcls_config* config,
                                           char* buf, size_t size,
                                           size_t* needed);

/* ---- kernel construction ---- */

/* Builds a kernel of shape [c_out, c_in, sizes...] from m elements per
 * (c_out, c_in) pair. weights is [c_out, c_in, m]; positions and sigmas hold
 * `rank` consecutive [c_out, c_in, m] blocks (axis 0 first). */
DCLS_API dcls_status dcls_kernel_construct(
    dcls_interp kind, int rank, const int* sizes, int m, size_t c_out,
    size_t c_in, const double* weights, const double* positions,
    const double* sigmas, dcls_kernel** out);
DCLS_API void dcls_kernel_destroy(dcls_kernel* kernel);
DCLS_API dcls_status dcls_kernel_size(const dcls_kernel* kernel, size_t* count);
DCLS_API dcls_status dcls_kernel_data(const dcls_kernel* kernel,
                                      const double** data);
/* Gradients with respect to the inputs of dcls_kernel_construct, laid out the
 * same way, from dL/dK. */
DCLS_API dcls_status dcls_kernel_backward(const dcls_kernel* kernel,
                                          const double* grad_kernel,
                                          double* grad_weights,
                                          double* grad_positions,
                                          double* grad_sigmas);

/* ---- commands ---- */

/* Each writes artifacts under out_dir and stores the process exit code in
 * *exit_code (nonzero for e.g. a failed gradcheck). Progress goes to stdout
 * when verbose is nonzero. */
DCLS_API dcls_status dcls_cmd_train(const dcls_config* config,
                                    const char* out_dir, int verbose,
                                    int* exit_code);
DCLS_API dcls_status dcls_cmd_eval(const dcls_config* config,
                                   const char* checkpoint, const char* out_dir,
                                   int verbose, int* exit_code);
DCLS_API dcls_status dcls_cmd_gradcheck(const dcls_config* config,
                                        const char* out_dir, int verbose,
                                        int* exit_code);
DCLS_API dcls_status dcls_cmd_inspect_kernel(const char* checkpoint,
                                             size_t layer, size_t channel,
                                             const char* out_dir, int verbose,
                                             int* exit_code);
DCLS_API dcls_status dcls_cmd_compare_interp(const dcls_config* config,
                                             const char* out_dir, int verbose,
                                             int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* DCLS_H_ */
