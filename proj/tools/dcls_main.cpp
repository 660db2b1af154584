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


// dcls: command-line front end over the C API.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dcls.h"

namespace {

struct Options {
  std::string config_file;
  std::vector<std::string> sets;
  long long seed = -1;
  int threads = 1;
  std::string out = "out";
  std::string checkpoint;
  std::size_t layer = 0;
  std::size_t channel = 0;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_file, "Config file (key = value with [section] headers)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", o.sets, "Override, e.g. --set optim.lr=0.01 (repeatable)");
  cmd->add_option("--seed", o.seed, "Random seed (overrides config)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output directory (DCLS_OUT overrides)");
}

int report(dcls_status status) {
  if (status == DCLS_OK) return 0;
  std::fprintf(stderr, "dcls: %s: %s\n", dcls_status_name(status),
               dcls_last_error());
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dilated convolution with learnable spacings"};
  app.require_subcommand(1);
  Options o;
  auto* train = app.add_subcommand("train", "Train a model; writes loss.csv, checkpoint.bin, kernels/");
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint; writes report.txt");
  auto* grad = app.add_subcommand("gradcheck", "Compare analytic gradients with finite differences");
  auto* inspect = app.add_subcommand("inspect-kernel", "Dump one constructed kernel as CSV and PGM");
  auto* compare = app.add_subcommand("compare-interp", "Train under each interpolation and compare losses");
  for (auto* cmd : {train, eval, grad, inspect, compare}) add_common(cmd, o);
  eval->add_option("--checkpoint", o.checkpoint, "Checkpoint (default OUT/checkpoint.bin)");
  inspect->add_option("--checkpoint", o.checkpoint, "Checkpoint (default OUT/checkpoint.bin)");
  inspect->add_option("--layer", o.layer, "DCLS layer index");
  inspect->add_option("--channel", o.channel, "Output channel");
  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("DCLS_OUT"); env && *env) o.out = env;
  if (o.checkpoint.empty()) o.checkpoint = o.out + "/checkpoint.bin";

  if (int rc = report(dcls_set_num_threads(o.threads))) return rc;
  dcls_config* config = nullptr;
  if (int rc = report(dcls_config_create(&config))) return rc;
  struct Release {
    dcls_config* c;
    ~Release() { dcls_config_destroy(c); }
  } release{config};

  if (!o.config_file.empty())
    if (int rc = report(dcls_config_load_file(config, o.config_file.c_str()))) return rc;
  for (const std::string& s : o.sets)
    if (int rc = report(dcls_config_set(config, s.c_str()))) return rc;
  if (o.seed >= 0) {
    const std::string s = "seed=" + std::to_string(o.seed);
    if (int rc = report(dcls_config_set(config, s.c_str()))) return rc;
  }

  int exit_code = 0;
  dcls_status status = DCLS_OK;
  const char* out = o.out.c_str();
  if (*train) {
    status = dcls_cmd_train(config, out, 1, &exit_code);
  } else if (*eval) {
    status = dcls_cmd_eval(config, o.checkpoint.c_str(), out, 1, &exit_code);
  } else if (*grad) {
    status = dcls_cmd_gradcheck(config, out, 1, &exit_code);
  } else if (*inspect) {
    status = dcls_cmd_inspect_kernel(o.checkpoint.c_str(), o.layer, o.channel,
                                     out, 1, &exit_code);
  } else if (*compare) {
    status = dcls_cmd_compare_interp(config, out, 1, &exit_code);
  }
  if (int rc = report(status)) return rc;
  return exit_code;
}
