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

// Parameter bookkeeping for DCLS training: initialization, optimizer groups
// with per-kind learning-rate scale and weight-decay exclusion, shared
// position storage across layers, and the post-step clamping hook.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kernelgen.hpp"

namespace dcls {

enum class ParamKind { kWeight, kPosition, kSigma, kOther };

std::string_view param_kind_name(ParamKind kind);

struct Parameter {
  std::string name;
  ParamKind kind = ParamKind::kOther;
  Tensor value;
  Tensor grad;
};

using ParamStore = std::vector<Parameter>;

void zero_grads(ParamStore& store);

struct ParamGroup {
  ParamKind kind = ParamKind::kWeight;
  double lr_scale = 1.0;
  bool weight_decay_enabled = true;
  std::vector<std::size_t> members;  // indices into the ParamStore
};

inline constexpr double kDefaultPositionLrScale = 5.0;

struct GroupPolicy {
  double lr_scale_positions = kDefaultPositionLrScale;
  double lr_scale_sigmas = kDefaultPositionLrScale;
};

/// One group per parameter kind present in the store, in kind order.
/// Positions and sigmas never decay; "other" parameters (biases) do not
/// decay either.
std::vector<ParamGroup> make_param_groups(const ParamStore& store,
                                          const GroupPolicy& policy = {});

enum class OptimizerType { kSgd, kAdamW };

std::string_view optimizer_name(OptimizerType type);
OptimizerType parse_optimizer(std::string_view name);

struct OptimizerConfig {
  OptimizerType type = OptimizerType::kAdamW;
  double base_lr = 1e-3;
  double weight_decay = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct OptimizerState {
  std::int64_t step = 0;
  std::vector<Tensor> first_moment;   // AdamW only, one per parameter
  std::vector<Tensor> second_moment;

  friend bool operator==(const OptimizerState&, const OptimizerState&) = default;
};

/// One update with decoupled weight decay. Plain SGD:
///   w <- w - lr * g - lr * lambda * w     (decay only where enabled)
/// with lr = base_lr * lr_scale of the parameter's group. Throws kNonFinite
/// before touching anything if any gradient is non-finite.
void optimizer_step(ParamStore& store, const std::vector<ParamGroup>& groups,
                    const OptimizerConfig& config, OptimizerState& state);

/// Layers sharing one positions+sigmas storage; weights stay private.
struct SyncGroup {
  std::vector<std::size_t> members;  // layer indices
};

/// Elementwise sum of the members' gradients, accumulated in member order.
/// Each member contributes the same list of tensors (e.g. positions then
/// sigmas per axis).
std::vector<Tensor> sync_group_step(
    std::span<const std::vector<Tensor>> per_member_grads);

/// Key used for automatic grouping: layers sync only when everything that
/// determines the storage shape and meaning matches.
struct SyncSignature {
  std::size_t c_out = 0;
  std::size_t c_in_per_group = 0;
  DclsGeometry geom;
  InterpKind kind = InterpKind::kGauss;

  friend bool operator==(const SyncSignature&, const SyncSignature&) = default;
};

/// Groups layer indices by identical signature, ordered by first member.
std::vector<SyncGroup> auto_sync_groups(std::span<const SyncSignature> layers);

inline constexpr double kInitPositionStd = 0.5;
inline constexpr double kInitGaussSigma = 0.23;

/// Positions ~ N(0, 0.5^2); raw sigma 0.23 for Gauss, 0 otherwise; weights
/// ~ U(-b, b) with b = 1 / sqrt(c_in_per_group * m). Bilinear positions are
/// clamped after sampling.
DclsParams init_params(std::size_t c_out, std::size_t c_in_per_group,
                       const DclsGeometry& geom, const Interpolation& interp,
                       std::mt19937_64& rng,
                       double position_std = kInitPositionStd);
DclsParams init_params(std::size_t c_out, std::size_t c_in_per_group,
                       const DclsGeometry& geom, const Interpolation& interp,
                       std::uint64_t seed);

/// Applied after every optimizer step.
DclsParams post_step_hook(DclsParams params, const DclsGeometry& geom,
                          const Interpolation& interp);

}  // namespace dcls
