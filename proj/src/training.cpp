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

#include "training.hpp"

#include <cmath>

#include "error.hpp"

namespace dcls {

std::string_view param_kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::kWeight: return "weight";
    case ParamKind::kPosition: return "position";
    case ParamKind::kSigma: return "sigma";
    case ParamKind::kOther: return "other";
  }
  return "unknown";
}

void zero_grads(ParamStore& store) {
  for (Parameter& p : store) {
    if (p.grad.shape() != p.value.shape()) p.grad = Tensor(p.value.shape());
    else p.grad.fill(0.0);
  }
}

std::vector<ParamGroup> make_param_groups(const ParamStore& store,
                                          const GroupPolicy& policy) {
  std::vector<ParamGroup> groups;
  for (ParamKind kind : {ParamKind::kWeight, ParamKind::kPosition,
                         ParamKind::kSigma, ParamKind::kOther}) {
    ParamGroup g;
    g.kind = kind;
    switch (kind) {
      case ParamKind::kWeight:
        g.lr_scale = 1.0;
        g.weight_decay_enabled = true;
        break;
      case ParamKind::kPosition:
        g.lr_scale = policy.lr_scale_positions;
        g.weight_decay_enabled = false;
        break;
      case ParamKind::kSigma:
        g.lr_scale = policy.lr_scale_sigmas;
        g.weight_decay_enabled = false;
        break;
      case ParamKind::kOther:
        g.lr_scale = 1.0;
        g.weight_decay_enabled = false;
        break;
    }
    for (std::size_t i = 0; i < store.size(); ++i)
      if (store[i].kind == kind) g.members.push_back(i);
    if (!g.members.empty()) groups.push_back(std::move(g));
  }
  return groups;
}

std::string_view optimizer_name(OptimizerType type) {
  return type == OptimizerType::kSgd ? "sgd" : "adamw";
}

OptimizerType parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerType::kSgd;
  if (name == "adamw") return OptimizerType::kAdamW;
  fail(ErrorCode::kInvalidArgument,
       "unknown optimizer '" + std::string(name) + "'");
}

void optimizer_step(ParamStore& store, const std::vector<ParamGroup>& groups,
                    const OptimizerConfig& config, OptimizerState& state) {
  for (const ParamGroup& g : groups) {
    for (std::size_t idx : g.members) {
      DCLS_CHECK(idx < store.size(), ErrorCode::kInvalidArgument,
                 "parameter group references missing parameter");
      const Parameter& p = store[idx];
      DCLS_CHECK(p.grad.shape() == p.value.shape(), ErrorCode::kShapeMismatch,
                 "gradient of '" + p.name + "' has shape " +
                     shape_str(p.grad.shape()) + ", value has " +
                     shape_str(p.value.shape()));
      DCLS_CHECK(p.grad.all_finite(), ErrorCode::kNonFinite,
                 "non-finite gradient for '" + p.name + "'");
    }
  }

  if (config.type == OptimizerType::kAdamW &&
      state.first_moment.size() != store.size()) {
    state.first_moment.clear();
    state.second_moment.clear();
    for (const Parameter& p : store) {
      state.first_moment.emplace_back(p.value.shape());
      state.second_moment.emplace_back(p.value.shape());
    }
  }
  ++state.step;

  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));

  for (const ParamGroup& g : groups) {
    const double lr = config.base_lr * g.lr_scale;
    const double decay = g.weight_decay_enabled ? config.weight_decay : 0.0;
    for (std::size_t idx : g.members) {
      Parameter& p = store[idx];
      double* w = p.value.data();
      const double* grad = p.grad.data();
      const std::size_t n = p.value.size();
      if (config.type == OptimizerType::kSgd) {
        for (std::size_t i = 0; i < n; ++i)
          w[i] = w[i] - lr * grad[i] - lr * decay * w[i];
      } else {
        double* m = state.first_moment[idx].data();
        double* v = state.second_moment[idx].data();
        for (std::size_t i = 0; i < n; ++i) {
          m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grad[i];
          v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
          const double update =
              (m[i] / bias1) / (std::sqrt(v[i] / bias2) + config.eps);
          w[i] = w[i] - lr * decay * w[i] - lr * update;
        }
      }
    }
  }
}

std::vector<Tensor> sync_group_step(
    std::span<const std::vector<Tensor>> per_member_grads) {
  DCLS_CHECK(!per_member_grads.empty(), ErrorCode::kInvalidArgument,
             "sync group has no members");
  std::vector<Tensor> shared = per_member_grads.front();
  for (std::size_t m = 1; m < per_member_grads.size(); ++m) {
    const auto& member = per_member_grads[m];
    DCLS_CHECK(member.size() == shared.size(), ErrorCode::kShapeMismatch,
               "sync group member " + std::to_string(m) +
                   " has a different number of shared tensors");
    for (std::size_t t = 0; t < shared.size(); ++t) {
      DCLS_CHECK(member[t].shape() == shared[t].shape(),
                 ErrorCode::kShapeMismatch,
                 "sync group member " + std::to_string(m) + " tensor " +
                     std::to_string(t) + " has shape " +
                     shape_str(member[t].shape()) + ", expected " +
                     shape_str(shared[t].shape()));
      shared[t] += member[t];
    }
  }
  return shared;
}

std::vector<SyncGroup> auto_sync_groups(std::span<const SyncSignature> layers) {
  std::vector<SyncGroup> groups;
  std::vector<SyncSignature> keys;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    std::size_t g = 0;
    while (g < keys.size() && !(keys[g] == layers[i])) ++g;
    if (g == keys.size()) {
      keys.push_back(layers[i]);
      groups.emplace_back();
    }
    groups[g].members.push_back(i);
  }
  return groups;
}

DclsParams init_params(std::size_t c_out, std::size_t c_in_per_group,
                       const DclsGeometry& geom, const Interpolation& interp,
                       std::mt19937_64& rng, double position_std) {
  DclsParams p = DclsParams::zeros(c_out, c_in_per_group, geom);
  const double bound =
      1.0 / std::sqrt(static_cast<double>(c_in_per_group * geom.kernel_count));
  std::uniform_real_distribution<double> uniform(-bound, bound);
  for (double& w : p.weights.values()) w = uniform(rng);

  std::normal_distribution<double> normal(0.0, position_std);
  for (Tensor& axis : p.positions)
    for (double& v : axis.values()) v = normal(rng);

  const double sigma =
      interp.kind == InterpKind::kGauss ? kInitGaussSigma : 0.0;
  for (Tensor& axis : p.sigmas) axis.fill(sigma);
  return clamp_positions(std::move(p), geom, interp);
}

DclsParams init_params(std::size_t c_out, std::size_t c_in_per_group,
                       const DclsGeometry& geom, const Interpolation& interp,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return init_params(c_out, c_in_per_group, geom, interp, rng);
}

DclsParams post_step_hook(DclsParams params, const DclsGeometry& geom,
                          const Interpolation& interp) {
  return clamp_positions(std::move(params), geom, interp);
}

}  // namespace dcls
