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

// Run configuration: a flat key=value text format with [section] headers.
//
//   # comment
//   seed = 3
//   [model]
//   interp = gauss
//   dilated_size = 23
//
// Every key has a default, unknown keys are rejected, and serialize() emits
// every key in a fixed order so that parse(serialize(c)) == c.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "interp.hpp"
#include "training.hpp"

namespace dcls {

struct DataConfig {
  std::string source = "synth";  // synth | idx | csv
  std::string images;            // idx images path
  std::string labels;            // idx labels path
  std::string csv;               // csv path
  int height = 28;               // csv only
  int width = 28;
  std::size_t n = 2000;          // synth only
  int size = 32;
  int classes = 4;
  double noise = 0.2;
  double val_fraction = 0.1;
  bool standardize = false;

  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

struct ModelConfig {
  // Comma-separated layer list. Tokens: pw:C (1x1 conv with bias), dcls
  // (depthwise DCLS), relu, pool:K (KxK average pool), gap (global average
  // pool), gmp (global max pool), fc (linear classifier with bias).
  std::string layers = "pool:2,pw:8,dcls,pw:8,relu,dcls,pw:8,relu,gap,fc";
  InterpKind interp = InterpKind::kGauss;
  int kernel_count = 8;
  int dilated_size = 23;
  std::string sync = "none";  // none | auto
  double position_init_std = kInitPositionStd;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct OptimConfig {
  OptimizerType type = OptimizerType::kAdamW;
  double lr = 0.01;
  double weight_decay = 0.05;
  double lr_scale_positions = kDefaultPositionLrScale;
  double lr_scale_sigmas = kDefaultPositionLrScale;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int epochs = 10;
  int batch_size = 32;

  friend bool operator==(const OptimConfig&, const OptimConfig&) = default;
};

struct GradcheckConfig {
  int kernel_cases = 60;
  int layer_cases = 10;
  std::string kinds = "triangle,gauss";
  double step = 1e-5;
  double kernel_tolerance = 1e-5;
  double layer_tolerance = 1e-4;
  std::string inject_fault = "none";  // none | sigma_sign

  friend bool operator==(const GradcheckConfig&, const GradcheckConfig&) = default;
};

struct CompareConfig {
  std::string seeds = "1,2,3";

  friend bool operator==(const CompareConfig&, const CompareConfig&) = default;
};

struct RunConfig {
  std::uint64_t seed = 0;
  DataConfig data;
  ModelConfig model;
  OptimConfig optim;
  GradcheckConfig gradcheck;
  CompareConfig compare;

  /// Applies "section.key=value" (or "key=value" for top-level keys).
  void set(std::string_view assignment);
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static std::vector<std::string> keys();

  std::string serialize() const;
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);

  /// FNV-1a 64 of serialize(), as 16 hex digits.
  std::string hash() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::vector<std::uint64_t> parse_seed_list(std::string_view text);
std::vector<InterpKind> parse_kind_list(std::string_view text);

}  // namespace dcls
