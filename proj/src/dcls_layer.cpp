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

#include "dcls_layer.hpp"

#include "error.hpp"

namespace dcls {

Tensor dcls_layer_forward(const Tensor& input, const DclsParams& params,
                          const DclsGeometry& geom, const Interpolation& interp,
                          const ConvSpec& spec, DclsLayerCache* cache) {
  DCLS_CHECK(input.rank() == static_cast<std::size_t>(geom.rank()) + 2,
             ErrorCode::kShapeMismatch,
             "input " + shape_str(input.shape()) + " does not match a rank-" +
                 std::to_string(geom.rank()) + " DCLS layer");
  ConstructedKernel kernel =
      construct_kernel(params, geom, interp, cache != nullptr);
  Tensor out = conv_forward(input, kernel.kernel, spec);
  if (cache) {
    cache->kernel = std::move(kernel);
    cache->input = input;
  }
  return out;
}

DclsLayerGrads dcls_layer_backward(const DclsLayerCache& cache,
                                   const ConvSpec& spec,
                                   const Tensor& grad_out) {
  ConvGrads conv = conv_backward(cache.input, cache.kernel.kernel, spec, grad_out);
  return {std::move(conv.input),
          construct_kernel_backward(cache.kernel, conv.kernel)};
}

}  // namespace dcls
