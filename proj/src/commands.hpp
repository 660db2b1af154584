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

// Batch commands behind the CLI. Each returns a process exit code and writes
// its artifacts under `out`.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "data.hpp"
#include "tensor.hpp"

namespace dcls {

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> epochs;
};

/// Builds (train, val) from the data section.
std::pair<Dataset, Dataset> load_datasets(const RunConfig& config);

/// Trains from scratch. When `out` is non-empty, writes loss.csv,
/// checkpoint.bin and kernels/ there.
TrainResult run_training(const RunConfig& config,
                         const std::filesystem::path& out, std::ostream& log);

int cmd_train(const RunConfig& config, const std::filesystem::path& out,
              std::ostream& log);
int cmd_eval(const RunConfig& config, const std::filesystem::path& checkpoint,
             const std::filesystem::path& out, std::ostream& log);
int cmd_gradcheck(const RunConfig& config, const std::filesystem::path& out,
                  std::ostream& log);
int cmd_inspect_kernel(const std::filesystem::path& checkpoint,
                       std::size_t layer, std::size_t channel,
                       const std::filesystem::path& out, std::ostream& log);
int cmd_compare_interp(const RunConfig& config,
                       const std::filesystem::path& out, std::ostream& log);

/// Pooled-variance two-sample t statistic; nullopt when either side has fewer
/// than two samples or the pooled variance is zero with unequal means.
std::optional<double> two_sample_t(std::span<const double> a,
                                   std::span<const double> b);

/// Binary 8-bit PGM, min-max scaled. `image` is [H, W].
void write_pgm(const Tensor& image, const std::filesystem::path& path);
/// Kernel slice [H, W] (or [W]) as CSV with header and comment line.
void write_kernel_csv(const Tensor& image, const std::filesystem::path& path,
                      const std::string& comment);

}  // namespace dcls
