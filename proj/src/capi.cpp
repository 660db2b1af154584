// Copyright 2026 The DCLS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "dcls.h"

#include <cstring>
#include <exception>
#include <iostream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "error.hpp"
#include "kernelgen.hpp"
#include "parallel.hpp"

struct dcls_config {
  dcls::RunConfig value;
};

struct dcls_kernel {
  dcls::ConstructedKernel built;
  int rank = 0;
};

namespace {

thread_local std::string g_last_error;

dcls_status to_status(dcls::ErrorCode code) {
  return static_cast<dcls_status>(static_cast<int>(code));
}

template <typename F>
dcls_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return DCLS_OK;
  } catch (const dcls::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DCLS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DCLS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  DCLS_CHECK(p != nullptr, dcls::ErrorCode::kInvalidArgument,
             std::string(what) + " must not be NULL");
}

dcls::InterpKind to_kind(dcls_interp kind) {
  switch (kind) {
    case DCLS_INTERP_BILINEAR: return dcls::InterpKind::kBilinear;
    case DCLS_INTERP_TRIANGLE: return dcls::InterpKind::kTriangle;
    case DCLS_INTERP_GAUSS: return dcls::InterpKind::kGauss;
  }
  dcls::fail(dcls::ErrorCode::kInvalidArgument, "unknown interpolation kind");
}

void copy_out(const std::string& text, char* buf, std::size_t size,
              std::size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf) return;
  DCLS_CHECK(size > text.size(), dcls::ErrorCode::kInvalidArgument,
             "buffer of " + std::to_string(size) + " bytes is too small, need " +
                 std::to_string(text.size() + 1));
  std::memcpy(buf, text.c_str(), text.size() + 1);
}

template <typename F>
dcls_status run_command(int verbose, int* exit_code, F&& body) {
  return guard([&] {
    require(exit_code, "exit_code");
    std::ostringstream sink;
    std::ostream& log = verbose ? std::cout : static_cast<std::ostream&>(sink);
    *exit_code = body(log);
    log.flush();
  });
}

}  // namespace

extern "C" {

const char* dcls_last_error(void) { return g_last_error.c_str(); }

const char* dcls_status_name(dcls_status status) {
  if (status == DCLS_OK) return "ok";
  return dcls::error_code_name(static_cast<dcls::ErrorCode>(status));
}

const char* dcls_version(void) { return "1.0.0"; }

dcls_status dcls_set_num_threads(int threads) {
  return guard([&] {
    DCLS_CHECK(threads >= 1, dcls::ErrorCode::kInvalidArgument,
               "thread count must be >= 1");
    dcls::set_num_threads(threads);
  });
}

dcls_status dcls_interp_eval(dcls_interp kind, double x, double sigma_raw,
                             double* out) {
  return guard([&] {
    require(out, "out");
    *out = dcls::interp_eval(dcls::Interpolation::of(to_kind(kind)), x, sigma_raw);
  });
}

dcls_status dcls_config_create(dcls_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new dcls_config();
  });
}

void dcls_config_destroy(dcls_config* config) { delete config; }

dcls_status dcls_config_load_file(dcls_config* config, const char* path) {
  return guard([&] {
    require(config, "config");
    require(path, "path");
    config->value = dcls::RunConfig::load(path);
  });
}

dcls_status dcls_config_set(dcls_config* config, const char* assignment) {
  return guard([&] {
    require(config, "config");
    require(assignment, "assignment");
    config->value.set(assignment);
  });
}

dcls_status dcls_config_get(const dcls_config* config, const char* key,
                            char* buf, size_t size, size_t* needed) {
  return guard([&] {
    require(config, "config");
    require(key, "key");
    copy_out(config->value.get(key), buf, size, needed);
  });
}

dcls_status dcls_config_serialize(const dcls_config* config, char* buf,
                                  size_t size, size_t* needed) {
  return guard([&] {
    require(config, "config");
    copy_out(config->value.serialize(), buf, size, needed);
  });
}

dcls_status dcls_kernel_construct(dcls_interp kind, int rank, const int* sizes,
                                  int m, size_t c_out, size_t c_in,
                                  const double* weights,
                                  const double* positions,
                                  const double* sigmas, dcls_kernel** out) {
  return guard([&] {
    require(sizes, "sizes");
    require(weights, "weights");
    require(positions, "positions");
    require(sigmas, "sigmas");
    require(out, "out");
    DCLS_CHECK(rank >= 1 && rank <= 3, dcls::ErrorCode::kInvalidArgument,
               "rank must be 1, 2 or 3");
    DCLS_CHECK(m >= 1 && c_out >= 1 && c_in >= 1,
               dcls::ErrorCode::kInvalidArgument,
               "m, c_out and c_in must be positive");
    dcls::DclsGeometry geom{std::vector<int>(sizes, sizes + rank), m};
    geom.validate();
    dcls::DclsParams params = dcls::DclsParams::zeros(c_out, c_in, geom);
    const std::size_t n = params.weights.size();
    std::memcpy(params.weights.data(), weights, n * sizeof(double));
    for (int a = 0; a < rank; ++a) {
      std::memcpy(params.positions[a].data(), positions + a * n, n * sizeof(double));
      std::memcpy(params.sigmas[a].data(), sigmas + a * n, n * sizeof(double));
    }
    auto handle = std::make_unique<dcls_kernel>();
    handle->built = dcls::construct_kernel(
        params, geom, dcls::Interpolation::of(to_kind(kind)));
    handle->rank = rank;
    *out = handle.release();
  });
}

void dcls_kernel_destroy(dcls_kernel* kernel) { delete kernel; }

dcls_status dcls_kernel_size(const dcls_kernel* kernel, size_t* count) {
  return guard([&] {
    require(kernel, "kernel");
    require(count, "count");
    *count = kernel->built.kernel.size();
  });
}

dcls_status dcls_kernel_data(const dcls_kernel* kernel, const double** data) {
  return guard([&] {
    require(kernel, "kernel");
    require(data, "data");
    *data = kernel->built.kernel.data();
  });
}

dcls_status dcls_kernel_backward(const dcls_kernel* kernel,
                                 const double* grad_kernel,
                                 double* grad_weights, double* grad_positions,
                                 double* grad_sigmas) {
  return guard([&] {
    require(kernel, "kernel");
    require(grad_kernel, "grad_kernel");
    require(grad_weights, "grad_weights");
    require(grad_positions, "grad_positions");
    require(grad_sigmas, "grad_sigmas");
    const dcls::Tensor& k = kernel->built.kernel;
    const dcls::Tensor g(k.shape(),
                         std::vector<double>(grad_kernel, grad_kernel + k.size()));
    const dcls::DclsParams grads = dcls::construct_kernel_backward(kernel->built, g);
    const std::size_t n = grads.weights.size();
    std::memcpy(grad_weights, grads.weights.data(), n * sizeof(double));
    for (int a = 0; a < kernel->rank; ++a) {
      std::memcpy(grad_positions + a * n, grads.positions[a].data(), n * sizeof(double));
      std::memcpy(grad_sigmas + a * n, grads.sigmas[a].data(), n * sizeof(double));
    }
  });
}

dcls_status dcls_cmd_train(const dcls_config* config, const char* out_dir,
                           int verbose, int* exit_code) {
  return run_command(verbose, exit_code, [&](std::ostream& log) {
    require(config, "config");
    require(out_dir, "out_dir");
    return dcls::cmd_train(config->value, out_dir, log);
  });
}

dcls_status dcls_cmd_eval(const dcls_config* config, const char* checkpoint,
                          const char* out_dir, int verbose, int* exit_code) {
  return run_command(verbose, exit_code, [&](std::ostream& log) {
    require(config, "config");
    require(checkpoint, "checkpoint");
    require(out_dir, "out_dir");
    return dcls::cmd_eval(config->value, checkpoint, out_dir, log);
  });
}

dcls_status dcls_cmd_gradcheck(const dcls_config* config, const char* out_dir,
                               int verbose, int* exit_code) {
  return run_command(verbose, exit_code, [&](std::ostream& log) {
    require(config, "config");
    require(out_dir, "out_dir");
    return dcls::cmd_gradcheck(config->value, out_dir, log);
  });
}

dcls_status dcls_cmd_inspect_kernel(const char* checkpoint, size_t layer,
                                    size_t channel, const char* out_dir,
                                    int verbose, int* exit_code) {
  return run_command(verbose, exit_code, [&](std::ostream& log) {
    require(checkpoint, "checkpoint");
    require(out_dir, "out_dir");
    return dcls::cmd_inspect_kernel(checkpoint, layer, channel, out_dir, log);
  });
}

dcls_status dcls_cmd_compare_interp(const dcls_config* config,
                                    const char* out_dir, int verbose,
                                    int* exit_code) {
  return run_command(verbose, exit_code, [&](std::ostream& log) {
    require(config, "config");
    require(out_dir, "out_dir");
    return dcls::cmd_compare_interp(config->value, out_dir, log);
  });
}

}  // extern "C"
