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

#include "conv.hpp"
#include "kernelgen.hpp"

namespace dcls {

/// State kept between a DCLS layer's forward and backward passes.
struct DclsLayerCache {
  ConstructedKernel kernel;
  Tensor input;
};

/// construct_kernel followed by conv_forward. When cache is non-null it is
/// filled for dcls_layer_backward.
Tensor dcls_layer_forward(const Tensor& input, const DclsParams& params,
                          const DclsGeometry& geom, const Interpolation& interp,
                          const ConvSpec& spec, DclsLayerCache* cache);

struct DclsLayerGrads {
  Tensor input;
  DclsParams params;
};

DclsLayerGrads dcls_layer_backward(const DclsLayerCache& cache,
                                   const ConvSpec& spec,
                                   const Tensor& grad_out);

}  // namespace dcls
