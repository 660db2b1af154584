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

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tensor.hpp"

namespace dcls {

/// Images [N, C, H, W] with pixels in [0, 1] (unless standardized) and one
/// integer label per image. Immutable once built.
struct Dataset {
  Tensor images;
  std::vector<int> labels;
  int classes = 0;
  std::string source;

  std::size_t size() const { return labels.size(); }
  std::size_t channels() const { return images.dim(1); }
  std::size_t height() const { return images.dim(2); }
  std::size_t width() const { return images.dim(3); }

  /// Copies the listed samples, in order, into a new dataset.
  Dataset subset(const std::vector<std::size_t>& indices) const;
  void validate() const;
};

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// IDX pair: big-endian u32 magic, big-endian u32 dims, then u8 payload.
/// Images are [N, H, W] (magic 0x803), labels [N] (magic 0x801). Pixels are
/// scaled by 1/255. The class count is max(label) + 1.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path);

/// One sample per line: label, then height*width pixel values (row-major).
/// Lines starting with '#' are comments; a first data line whose first cell
/// is "label" is a header. When classes is 0 it is inferred as max + 1.
Dataset load_csv(const std::filesystem::path& path, int height, int width,
                 int classes = 0);

/// Writes the single-channel dataset in the load_csv format, pixels with 17
/// significant digits, preceded by a comment line and a header row.
void write_csv(const Dataset& data, const std::filesystem::path& path,
               const std::string& comment = {});

struct SynthOptions {
  std::size_t n = 2000;
  int size = 32;
  int classes = 4;
  std::uint64_t seed = 0;
  double noise = 0.2;   // background is U(0, noise)
  bool noise_free = false;
};

/// Two bright dots on noise. The label is the angle of the (undirected) dot
/// offset, quantized into `classes` equal bins over [0, pi); the dot
/// separation is uniform in [size/3, size/2]. Offsets within 3 degrees of a
/// bin boundary are resampled so labels are unambiguous.
Dataset synth_longrange(const SynthOptions& options);

/// Deterministic seeded permutation split into (train, validation).
std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          double val_fraction,
                                          std::uint64_t seed);

/// Per-channel zero mean / unit variance using statistics of `reference`.
void standardize(Dataset& data, const Dataset& reference);

}  // namespace dcls
