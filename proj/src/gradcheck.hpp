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

// Randomized comparison of analytic gradients against central finite
// differences, at kernel-construction level and full-layer level.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "interp.hpp"

namespace dcls {

inline constexpr double kDefaultFdStep = 1e-5;
inline constexpr double kKinkExclusion = 1e-3;

/// |a - n| / max(|a|, |n|, 1e-12).
double relative_error(double analytic, double numeric);

/// (f(x + h e_i) - f(x - h e_i)) / 2h for every coordinate i.
std::vector<double> central_difference(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h = kDefaultFdStep);

struct GradCheckEntry {
  std::string level;  // "kernel" or "layer"
  InterpKind kind = InterpKind::kGauss;
  std::string param;  // weights, positions, sigmas, input
  double max_rel_error = 0.0;
  std::size_t points = 0;
  std::size_t skipped_kinks = 0;
  double tolerance = 0.0;
  bool fixed = false;  // bilinear sigma: no gradient by construction

  bool passed() const { return fixed || max_rel_error < tolerance; }
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;

  bool passed() const;
  /// CSV table, one row per entry, preceded by `comment` when given.
  std::string to_csv(const std::string& comment = {}) const;
};

struct GradCheckOptions {
  std::vector<InterpKind> kinds{InterpKind::kTriangle, InterpKind::kGauss};
  int kernel_cases = 60;
  int layer_cases = 10;
  double step = kDefaultFdStep;
  double kernel_tolerance = 1e-5;
  double layer_tolerance = 1e-4;
  std::uint64_t seed = 0;
  // Mutation hook for testing the checker itself: negates the analytic sigma
  // gradient before comparison.
  bool flip_sigma_sign = false;
};

/// Kernel construction: random configurations cycling ranks 1/2/3, m in
/// {1, 3, 7}, sizes in {3, 5, 9}, per requested kind; loss sum(c * K).
GradCheckReport kernel_gradcheck(const GradCheckOptions& options);

/// Full DCLS layer on a 1x4x9x9 input, checking w, p, sigma and the input.
GradCheckReport layer_gradcheck(const GradCheckOptions& options);

}  // namespace dcls
