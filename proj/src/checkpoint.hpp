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

// Binary checkpoint, little-endian:
//
//   "DCLSCKPT"  u32 version (=1)
//   str config_text   str rng_state   i64 epoch
//   u64 param_count   { str name, u8 kind, tensor value }*
//   i64 optimizer_step
//   u64 moment_count  { tensor first, tensor second }*
//
// where str = u64 length + bytes and tensor = u64 rank, u64 dims[rank],
// f64 data[numel]. Doubles are stored as raw IEEE-754 bits, so a save/load
// cycle is bit-exact.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "training.hpp"

namespace dcls {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string config_text;
  std::string rng_state;
  std::int64_t epoch = 0;
  ParamStore params;  // values only; grads are not stored
  OptimizerState optimizer;
};

std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(const std::string& bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Copies checkpoint values into `store`, matching by name and shape.
void restore_params(ParamStore& store, const ParamStore& saved);

}  // namespace dcls
