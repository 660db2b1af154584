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

// Dense kernel construction from learnable (weight, position, sigma) triples.
//
// For every (out channel, in channel) pair and every element k, positions are
// shifted to the grid origin (p + s // 2 per axis), the element is spread over
// the whole dilated grid as a product of per-axis interpolations, the map is
// normalized by (eps + sum) and accumulated into the kernel with weight w_k.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "interp.hpp"
#include "tensor.hpp"

namespace dcls {

inline constexpr double kNormalizationEps = 1e-7;
inline constexpr double kClampMargin = 1e-6;

struct DclsGeometry {
  std::vector<int> dilated_size;  // one per spatial axis, rank 1..3
  int kernel_count = 1;

  int rank() const { return static_cast<int>(dilated_size.size()); }
  std::size_t grid_size() const;
  void validate() const;

  friend bool operator==(const DclsGeometry&, const DclsGeometry&) = default;
};

/// Learnable tensors of one layer, all shaped [c_out, c_in / groups, m].
/// The same struct carries gradients.
struct DclsParams {
  Tensor weights;
  std::vector<Tensor> positions;  // one per spatial axis, grid units
  std::vector<Tensor> sigmas;     // raw, before |.| + sigma0

  static DclsParams zeros(std::size_t c_out, std::size_t c_in_per_group,
                          const DclsGeometry& geom);

  std::size_t c_out() const { return weights.dim(0); }
  std::size_t c_in_per_group() const { return weights.dim(1); }
  std::size_t kernel_count() const { return weights.dim(2); }

  friend bool operator==(const DclsParams&, const DclsParams&) = default;
};

void validate_params(const DclsParams& params, const DclsGeometry& geom);

/// Everything backward needs, retained at forward time.
struct KernelCache {
  Tensor weights;             // copy of w, [pairs, m]
  std::vector<double> maps;   // normalized maps, [pairs, m, grid]
  std::vector<double> sums;   // un-normalized map sums, [pairs, m]
  // Per-axis factors, [pairs, m, 3, max_axis]; absent axes hold value 1.
  std::vector<double> value;
  std::vector<double> d_dx;
  std::vector<double> d_dsigma;
  std::size_t max_axis = 1;
};

struct ConstructedKernel {
  Tensor kernel;  // [c_out, c_in / groups, s_0, ..., s_{rank-1}]
  DclsGeometry geom;
  Interpolation interp;
  std::optional<KernelCache> cache;

  std::size_t pairs() const { return kernel.dim(0) * kernel.dim(1); }
  /// Normalized map of element k for the flat channel pair index.
  std::span<const double> map(std::size_t pair, std::size_t k) const;
  double map_sum(std::size_t pair, std::size_t k) const;
};

ConstructedKernel construct_kernel(const DclsParams& params,
                                   const DclsGeometry& geom,
                                   const Interpolation& interp,
                                   bool keep_cache = true);

DclsParams construct_kernel_backward(const ConstructedKernel& constructed,
                                     const Tensor& grad_kernel);

/// Bilinear keeps every centered position in [0, s - 1 - 1e-6]; other kinds
/// are returned unchanged.
DclsParams clamp_positions(DclsParams params, const DclsGeometry& geom,
                           const Interpolation& interp);

}  // namespace dcls
