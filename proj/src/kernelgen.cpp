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

#include "kernelgen.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "error.hpp"
#include "parallel.hpp"

namespace dcls {
namespace {

constexpr int kMaxRank = 3;

// Grid extents padded to three axes; absent trailing axes have extent 1.
std::array<std::size_t, kMaxRank> padded_extents(const DclsGeometry& geom) {
  std::array<std::size_t, kMaxRank> e{1, 1, 1};
  for (int a = 0; a < geom.rank(); ++a)
    e[a] = static_cast<std::size_t>(geom.dilated_size[a]);
  return e;
}

template <typename T>
struct BasicFactorView {
  T* value;
  T* d_dx;
  T* d_dsigma;
  std::size_t stride;  // max_axis

  T* v(int axis) const { return value + axis * stride; }
  T* dx(int axis) const { return d_dx + axis * stride; }
  T* ds(int axis) const { return d_dsigma + axis * stride; }
};
using FactorView = BasicFactorView<double>;
using ConstFactorView = BasicFactorView<const double>;

void fill_factors(const FactorView& f, const DclsGeometry& geom,
                  const Interpolation& interp, const DclsParams& params,
                  std::size_t flat_elem) {
  for (int a = 0; a < kMaxRank; ++a) {
    std::fill(f.v(a), f.v(a) + f.stride, 0.0);
    std::fill(f.dx(a), f.dx(a) + f.stride, 0.0);
    std::fill(f.ds(a), f.ds(a) + f.stride, 0.0);
  }
  for (int a = geom.rank(); a < kMaxRank; ++a) f.v(a)[0] = 1.0;

  for (int a = 0; a < geom.rank(); ++a) {
    const int s = geom.dilated_size[a];
    const double centered = params.positions[a][flat_elem] + (s / 2);
    const double sigma_raw = params.sigmas[a][flat_elem];
    for (int i = 0; i < s; ++i) {
      const InterpSample smp = interp_sample(interp, centered - i, sigma_raw);
      f.v(a)[i] = smp.value;
      f.dx(a)[i] = smp.d_dx;
      f.ds(a)[i] = smp.d_dsigma_raw;
    }
  }
}

}  // namespace

std::size_t DclsGeometry::grid_size() const {
  std::size_t n = 1;
  for (int s : dilated_size) n *= static_cast<std::size_t>(s);
  return n;
}

void DclsGeometry::validate() const {
  DCLS_CHECK(rank() >= 1 && rank() <= kMaxRank, ErrorCode::kInvalidArgument,
             "spatial rank must be 1, 2 or 3, got " + std::to_string(rank()));
  for (int s : dilated_size)
    DCLS_CHECK(s >= 1, ErrorCode::kInvalidArgument,
               "dilated kernel size must be >= 1, got " + std::to_string(s));
  DCLS_CHECK(kernel_count >= 1, ErrorCode::kInvalidArgument,
             "kernel count must be >= 1, got " + std::to_string(kernel_count));
}

DclsParams DclsParams::zeros(std::size_t c_out, std::size_t c_in_per_group,
                             const DclsGeometry& geom) {
  geom.validate();
  const Shape shape{c_out, c_in_per_group,
                    static_cast<std::size_t>(geom.kernel_count)};
  DclsParams p;
  p.weights = Tensor(shape);
  p.positions.assign(geom.rank(), Tensor(shape));
  p.sigmas.assign(geom.rank(), Tensor(shape));
  return p;
}

void validate_params(const DclsParams& params, const DclsGeometry& geom) {
  geom.validate();
  const Shape& shape = params.weights.shape();
  DCLS_CHECK(shape.size() == 3, ErrorCode::kShapeMismatch,
             "weights must be [c_out, c_in/groups, m], got " +
                 shape_str(shape));
  DCLS_CHECK(shape[2] == static_cast<std::size_t>(geom.kernel_count),
             ErrorCode::kShapeMismatch,
             "weights carry " + std::to_string(shape[2]) +
                 " elements but kernel count is " +
                 std::to_string(geom.kernel_count));
  DCLS_CHECK(params.positions.size() == static_cast<std::size_t>(geom.rank()) &&
                 params.sigmas.size() == static_cast<std::size_t>(geom.rank()),
             ErrorCode::kShapeMismatch,
             "need one position and one sigma tensor per spatial axis");
  for (int a = 0; a < geom.rank(); ++a) {
    DCLS_CHECK(params.positions[a].shape() == shape &&
                   params.sigmas[a].shape() == shape,
               ErrorCode::kShapeMismatch,
               "axis " + std::to_string(a) +
                   " position/sigma shape differs from weights " +
                   shape_str(shape));
  }
  DCLS_CHECK(params.weights.all_finite(), ErrorCode::kNonFinite,
             "non-finite kernel weight");
  for (int a = 0; a < geom.rank(); ++a) {
    DCLS_CHECK(params.positions[a].all_finite(), ErrorCode::kNonFinite,
               "non-finite position on axis " + std::to_string(a));
    DCLS_CHECK(params.sigmas[a].all_finite(), ErrorCode::kNonFinite,
               "non-finite sigma on axis " + std::to_string(a));
  }
}

std::span<const double> ConstructedKernel::map(std::size_t pair,
                                               std::size_t k) const {
  DCLS_CHECK(cache.has_value(), ErrorCode::kMissingCache,
             "kernel was constructed without cache");
  const std::size_t grid = geom.grid_size();
  const std::size_t m = static_cast<std::size_t>(geom.kernel_count);
  return {cache->maps.data() + (pair * m + k) * grid, grid};
}

double ConstructedKernel::map_sum(std::size_t pair, std::size_t k) const {
  DCLS_CHECK(cache.has_value(), ErrorCode::kMissingCache,
             "kernel was constructed without cache");
  return cache->sums[pair * geom.kernel_count + k];
}

ConstructedKernel construct_kernel(const DclsParams& params,
                                   const DclsGeometry& geom,
                                   const Interpolation& interp,
                                   bool keep_cache) {
  validate_params(params, geom);

  const std::size_t c_out = params.c_out();
  const std::size_t c_in = params.c_in_per_group();
  const std::size_t pairs = c_out * c_in;
  const std::size_t m = params.kernel_count();
  const std::size_t grid = geom.grid_size();
  const auto ext = padded_extents(geom);
  const std::size_t max_axis = *std::max_element(ext.begin(), ext.end());
  const std::size_t factor_block = kMaxRank * max_axis;

  Shape kshape{c_out, c_in};
  for (int s : geom.dilated_size) kshape.push_back(static_cast<std::size_t>(s));

  ConstructedKernel out;
  out.kernel = Tensor(kshape);
  out.geom = geom;
  out.interp = interp;

  KernelCache cache;
  cache.max_axis = max_axis;
  if (keep_cache) {
    cache.weights = params.weights.reshaped({pairs, m});
    cache.maps.resize(pairs * m * grid);
    cache.sums.resize(pairs * m);
    cache.value.resize(pairs * m * factor_block);
    cache.d_dx.resize(pairs * m * factor_block);
    cache.d_dsigma.resize(pairs * m * factor_block);
  }

  parallel_for(pairs, [&](std::size_t pair) {
    std::vector<double> scratch_map;
    std::vector<double> scratch_factors;
    if (!keep_cache) {
      scratch_map.resize(grid);
      scratch_factors.resize(3 * factor_block);
    }
    double* kern = out.kernel.data() + pair * grid;

    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t elem = pair * m + k;
      double* h = keep_cache ? cache.maps.data() + elem * grid
                             : scratch_map.data();
      FactorView f =
          keep_cache
              ? FactorView{cache.value.data() + elem * factor_block,
                           cache.d_dx.data() + elem * factor_block,
                           cache.d_dsigma.data() + elem * factor_block,
                           max_axis}
              : FactorView{scratch_factors.data(),
                           scratch_factors.data() + factor_block,
                           scratch_factors.data() + 2 * factor_block, max_axis};
      fill_factors(f, geom, interp, params, elem);

      const double* v0 = f.v(0);
      const double* v1 = f.v(1);
      const double* v2 = f.v(2);
      double sum = 0.0;
      std::size_t idx = 0;
      for (std::size_t i0 = 0; i0 < ext[0]; ++i0)
        for (std::size_t i1 = 0; i1 < ext[1]; ++i1)
          for (std::size_t i2 = 0; i2 < ext[2]; ++i2, ++idx) {
            h[idx] = v0[i0] * v1[i1] * v2[i2];
            sum += h[idx];
          }

      const double inv = 1.0 / (kNormalizationEps + sum);
      const double w = params.weights[elem];
      for (std::size_t i = 0; i < grid; ++i) {
        h[i] *= inv;
        kern[i] += w * h[i];
      }
      if (keep_cache) cache.sums[elem] = sum;
    }
  });

  if (keep_cache) out.cache = std::move(cache);
  return out;
}

DclsParams construct_kernel_backward(const ConstructedKernel& constructed,
                                     const Tensor& grad_kernel) {
  DCLS_CHECK(constructed.cache.has_value(), ErrorCode::kMissingCache,
             "construct_kernel_backward needs a kernel built with its cache");
  DCLS_CHECK(grad_kernel.shape() == constructed.kernel.shape(),
             ErrorCode::kShapeMismatch,
             "kernel gradient " + shape_str(grad_kernel.shape()) +
                 " does not match kernel " +
                 shape_str(constructed.kernel.shape()));

  const KernelCache& cache = *constructed.cache;
  const DclsGeometry& geom = constructed.geom;
  const std::size_t c_out = constructed.kernel.dim(0);
  const std::size_t c_in = constructed.kernel.dim(1);
  const std::size_t pairs = c_out * c_in;
  const std::size_t m = static_cast<std::size_t>(geom.kernel_count);
  const std::size_t grid = geom.grid_size();
  const auto ext = padded_extents(geom);
  const std::size_t factor_block = kMaxRank * cache.max_axis;
  const int rank = geom.rank();
  const bool learns_sigma = constructed.interp.learns_sigma();

  DclsParams grads = DclsParams::zeros(c_out, c_in, geom);

  parallel_for(pairs, [&](std::size_t pair) {
    const double* g = grad_kernel.data() + pair * grid;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t elem = pair * m + k;
      const double* h = cache.maps.data() + elem * grid;

      double grad_w = 0.0;
      for (std::size_t i = 0; i < grid; ++i) grad_w += g[i] * h[i];
      grads.weights[elem] = grad_w;

      // Reverse through H = U / (eps + sum U): dL/dU = w (G - <G, H>) / A.
      const double coef =
          cache.weights[elem] / (kNormalizationEps + cache.sums[elem]);

      const ConstFactorView f{cache.value.data() + elem * factor_block,
                              cache.d_dx.data() + elem * factor_block,
                              cache.d_dsigma.data() + elem * factor_block,
                              cache.max_axis};
      const double *v0 = f.v(0), *v1 = f.v(1), *v2 = f.v(2);
      const double *x0 = f.dx(0), *x1 = f.dx(1), *x2 = f.dx(2);
      const double *s0 = f.ds(0), *s1 = f.ds(1), *s2 = f.ds(2);

      std::array<double, kMaxRank> gp{0.0, 0.0, 0.0};
      std::array<double, kMaxRank> gs{0.0, 0.0, 0.0};
      std::size_t idx = 0;
      for (std::size_t i0 = 0; i0 < ext[0]; ++i0)
        for (std::size_t i1 = 0; i1 < ext[1]; ++i1)
          for (std::size_t i2 = 0; i2 < ext[2]; ++i2, ++idx) {
            const double r = coef * (g[idx] - grad_w);
            const double p12 = v1[i1] * v2[i2];
            const double p02 = v0[i0] * v2[i2];
            const double p01 = v0[i0] * v1[i1];
            gp[0] += r * x0[i0] * p12;
            gp[1] += r * x1[i1] * p02;
            gp[2] += r * x2[i2] * p01;
            gs[0] += r * s0[i0] * p12;
            gs[1] += r * s1[i1] * p02;
            gs[2] += r * s2[i2] * p01;
          }
      for (int a = 0; a < rank; ++a) {
        grads.positions[a][elem] = gp[a];
        grads.sigmas[a][elem] = learns_sigma ? gs[a] : 0.0;
      }
    }
  });
  return grads;
}

DclsParams clamp_positions(DclsParams params, const DclsGeometry& geom,
                           const Interpolation& interp) {
  if (!interp.clamp_positions) return params;
  for (int a = 0; a < geom.rank() && a < static_cast<int>(params.positions.size());
       ++a) {
    const int s = geom.dilated_size[a];
    const double lo = -static_cast<double>(s / 2);
    const double hi =
        std::max(lo, static_cast<double>(s - 1 - s / 2) - kClampMargin);
    for (double& p : params.positions[a].values()) p = std::clamp(p, lo, hi);
  }
  return params;
}

}  // namespace dcls
