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

// Scalar interpolation functions used to spread a real-valued kernel element
// position over integer grid cells.
//
// Both functions take a raw standard deviation and apply the reparameterization
// sigma_eff = sigma0 + |sigma_raw|, so sigma_eff never falls below sigma0:
//
//   triangle(x, s) = max(0, sigma_eff - |x|)               sigma0 = 1
//   gauss(x, s)    = exp(-x^2 / (2 sigma_eff^2))            sigma0 = 0.27
//
// Bilinear is the triangle at sigma_eff = 1 with sigma_raw ignored.

#pragma once

#include <string_view>

namespace dcls {

enum class InterpKind { kBilinear, kTriangle, kGauss };

inline constexpr double kTriangleSigma0 = 1.0;
inline constexpr double kGaussSigma0 = 0.27;

struct Interpolation {
  InterpKind kind = InterpKind::kGauss;
  double sigma0 = kGaussSigma0;
  bool clamp_positions = false;

  static constexpr Interpolation bilinear() {
    return {InterpKind::kBilinear, kTriangleSigma0, true};
  }
  static constexpr Interpolation triangle() {
    return {InterpKind::kTriangle, kTriangleSigma0, false};
  }
  static constexpr Interpolation gauss() {
    return {InterpKind::kGauss, kGaussSigma0, false};
  }
  static constexpr Interpolation of(InterpKind kind) {
    switch (kind) {
      case InterpKind::kBilinear: return bilinear();
      case InterpKind::kTriangle: return triangle();
      case InterpKind::kGauss: return gauss();
    }
    return gauss();
  }

  /// False for bilinear, whose standard deviation is fixed.
  constexpr bool learns_sigma() const { return kind != InterpKind::kBilinear; }

  friend constexpr bool operator==(const Interpolation&,
                                   const Interpolation&) = default;
};

std::string_view interp_name(InterpKind kind);
/// Accepts "bilinear", "triangle" (or "lambda"), "gauss" (or "gaussian").
InterpKind parse_interp_kind(std::string_view name);

double triangle_eval(double x, double sigma_raw);
double gauss_eval(double x, double sigma_raw);
double interp_eval(const Interpolation& interp, double x, double sigma_raw);

struct InterpPartials {
  double d_dx = 0.0;
  double d_dsigma_raw = 0.0;
};

/// Exact partials with respect to the displacement and the raw standard
/// deviation (including the sign(sigma_raw) factor, sign(0) = 0). Triangle
/// kinks at x = 0 and |x| = sigma_eff get subgradient 0.
InterpPartials interp_grad(const Interpolation& interp, double x,
                           double sigma_raw);

struct InterpSample {
  double value = 0.0;
  double d_dx = 0.0;
  double d_dsigma_raw = 0.0;
};

/// Value and partials in one evaluation.
InterpSample interp_sample(const Interpolation& interp, double x,
                           double sigma_raw);

}  // namespace dcls
