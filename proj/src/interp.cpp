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

#include "interp.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace dcls {
namespace {

double sign_or_zero(double v) {
  return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

InterpSample triangle_sample(double x, double sigma_eff, double sigma_sign) {
  InterpSample s;
  const double ax = std::abs(x);
  if (ax >= sigma_eff) return s;
  s.value = sigma_eff - ax;
  s.d_dx = -sign_or_zero(x);
  s.d_dsigma_raw = sigma_sign;
  return s;
}

InterpSample gauss_sample(double x, double sigma_eff, double sigma_sign) {
  InterpSample s;
  const double inv_var = 1.0 / (sigma_eff * sigma_eff);
  s.value = std::exp(-0.5 * x * x * inv_var);
  s.d_dx = -x * inv_var * s.value;
  s.d_dsigma_raw = sigma_sign * x * x * inv_var / sigma_eff * s.value;
  return s;
}

}  // namespace

std::string_view interp_name(InterpKind kind) {
  switch (kind) {
    case InterpKind::kBilinear: return "bilinear";
    case InterpKind::kTriangle: return "triangle";
    case InterpKind::kGauss: return "gauss";
  }
  return "unknown";
}

InterpKind parse_interp_kind(std::string_view name) {
  if (name == "bilinear") return InterpKind::kBilinear;
  if (name == "triangle" || name == "lambda") return InterpKind::kTriangle;
  if (name == "gauss" || name == "gaussian") return InterpKind::kGauss;
  fail(ErrorCode::kInvalidArgument,
       "unknown interpolation '" + std::string(name) + "'");
}

double triangle_eval(double x, double sigma_raw) {
  return std::max(0.0, kTriangleSigma0 + std::abs(sigma_raw) - std::abs(x));
}

double gauss_eval(double x, double sigma_raw) {
  const double sigma_eff = kGaussSigma0 + std::abs(sigma_raw);
  return std::exp(-x * x / (2.0 * sigma_eff * sigma_eff));
}

double interp_eval(const Interpolation& interp, double x, double sigma_raw) {
  return interp_sample(interp, x, sigma_raw).value;
}

InterpPartials interp_grad(const Interpolation& interp, double x,
                           double sigma_raw) {
  const InterpSample s = interp_sample(interp, x, sigma_raw);
  return {s.d_dx, s.d_dsigma_raw};
}

InterpSample interp_sample(const Interpolation& interp, double x,
                           double sigma_raw) {
  switch (interp.kind) {
    case InterpKind::kBilinear:
      return triangle_sample(x, interp.sigma0, 0.0);
    case InterpKind::kTriangle:
      return triangle_sample(x, interp.sigma0 + std::abs(sigma_raw),
                             sign_or_zero(sigma_raw));
    case InterpKind::kGauss:
      return gauss_sample(x, interp.sigma0 + std::abs(sigma_raw),
                          sign_or_zero(sigma_raw));
  }
  fail(ErrorCode::kInternal, "unhandled interpolation kind");
}

}  // namespace dcls
