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

#pragma once

#include <vector>

#include "tensor.hpp"

namespace dcls {

/// Grouped N-D convolution parameters. Cross-correlation semantics (the
/// kernel is not flipped) with zero padding.
struct ConvSpec {
  std::vector<int> stride;   // per spatial axis, >= 1
  std::vector<int> padding;  // per spatial axis, >= 0
  int groups = 1;

  /// Stride 1 with padding s // 2 per axis, which keeps the spatial size for
  /// odd kernel extents.
  static ConvSpec same(const std::vector<int>& kernel_size, int groups = 1);

  friend bool operator==(const ConvSpec&, const ConvSpec&) = default;
};

/// Validates input [N, C_in, spatial...] against kernel [C_out, C_in/g, k...]
/// and returns the output shape [N, C_out, out...].
Shape conv_output_shape(const Shape& input, const Shape& kernel,
                        const ConvSpec& spec);

Tensor conv_forward(const Tensor& input, const Tensor& kernel,
                    const ConvSpec& spec);

struct ConvGrads {
  Tensor input;
  Tensor kernel;
};

ConvGrads conv_backward(const Tensor& input, const Tensor& kernel,
                        const ConvSpec& spec, const Tensor& grad_out);

}  // namespace dcls
