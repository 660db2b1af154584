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

// Small sequential image classifier built from a layer list, used by the
// train / eval / compare-interp commands.

#pragma once

#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "dcls_layer.hpp"
#include "training.hpp"

namespace dcls {

class Layer {
 public:
  virtual ~Layer() = default;
  virtual std::string describe() const = 0;
  virtual Tensor forward(const Tensor& x) = 0;
  /// Returns dL/dx and adds parameter gradients into the store.
  virtual Tensor backward(const Tensor& grad) = 0;
};

/// Where a DCLS layer's tensors live in the ParamStore. Layers of one sync
/// group point at the same position and sigma entries.
struct DclsSlot {
  std::size_t layer_index = 0;
  std::size_t channels = 0;
  DclsGeometry geom;
  Interpolation interp;
  std::size_t weight = 0;
  std::vector<std::size_t> positions;
  std::vector<std::size_t> sigmas;
};

class Network {
 public:
  /// input is [C, H, W] of one sample.
  static Network build(const ModelConfig& config, const Shape& input,
                       int classes, std::mt19937_64& rng);

  Network(Network&&) noexcept;
  Network& operator=(Network&&) noexcept;
  ~Network();

  /// Logits [N, classes].
  Tensor forward(const Tensor& x);
  /// Zeroes then fills every parameter gradient from dL/dlogits.
  void backward(const Tensor& grad_logits);

  ParamStore& params();
  const ParamStore& params() const;
  const std::vector<DclsSlot>& dcls_slots() const { return slots_; }
  const std::vector<SyncGroup>& sync_groups() const { return sync_groups_; }
  std::vector<std::string> describe() const;

  /// The DCLS tensors of slot `i`, copied out of the store.
  DclsParams dcls_params(std::size_t i) const;
  /// Clamping policy for every DCLS slot (shared storage clamped once).
  void post_step();

 private:
  struct Shared;
  friend class DclsDepthwiseLayer;

  Network();

  // Layers keep a pointer to Shared, which stays put when the Network moves.
  std::unique_ptr<Shared> shared_;
  std::vector<std::unique_ptr<Layer>> layers_;
  std::vector<DclsSlot> slots_;
  std::vector<SyncGroup> sync_groups_;  // indices into slots_
};

/// Mean softmax cross-entropy; when grad is non-null it receives dL/dlogits.
double softmax_cross_entropy(const Tensor& logits, std::span<const int> labels,
                             Tensor* grad);

/// Number of rows whose argmax equals the label.
std::size_t count_correct(const Tensor& logits, std::span<const int> labels);

}  // namespace dcls
