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


#include <cmath>
#include <random>

#include "doctest.h"
#include "gradcheck.hpp"
#include "interp.hpp"

using namespace dcls;

TEST_CASE("triangle values") {
  CHECK(triangle_eval(0.0, 0.0) == 1.0);
  CHECK(triangle_eval(1.0, 0.0) == 0.0);
  CHECK(triangle_eval(2.0, 4.0) == 3.0);
  CHECK(triangle_eval(-2.0, -4.0) == 3.0);
  CHECK(triangle_eval(7.5, 1.0) == 0.0);
}

TEST_CASE("gauss values") {
  CHECK(gauss_eval(0.0, 0.0) == 1.0);
  CHECK(gauss_eval(0.0, 12.3) == 1.0);
  const double expected = std::exp(-1.0 / (2.0 * 0.27 * 0.27));
  CHECK(gauss_eval(1.0, 0.0) == doctest::Approx(expected).epsilon(1e-15));
  // exp(-1 / (2 * 0.27^2)) = 1.0503e-3.
  CHECK(gauss_eval(1.0, 0.0) == doctest::Approx(1.0503e-3).epsilon(1e-4));
  CHECK(gauss_eval(0.27, 0.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(gauss_eval(0.27, 0.0) == doctest::Approx(0.60653).epsilon(1e-5));
}

TEST_CASE("interpolation kinds carry their policy") {
  CHECK(Interpolation::bilinear().sigma0 == 1.0);
  CHECK(Interpolation::bilinear().clamp_positions);
  CHECK_FALSE(Interpolation::bilinear().learns_sigma());
  CHECK(Interpolation::triangle().sigma0 == 1.0);
  CHECK_FALSE(Interpolation::triangle().clamp_positions);
  CHECK(Interpolation::gauss().sigma0 == 0.27);
  CHECK_FALSE(Interpolation::gauss().clamp_positions);
  CHECK(parse_interp_kind("gauss") == InterpKind::kGauss);
  CHECK(parse_interp_kind("triangle") == InterpKind::kTriangle);
  CHECK(parse_interp_kind("bilinear") == InterpKind::kBilinear);
  CHECK_THROWS(parse_interp_kind("sinc"));
}

TEST_CASE("bilinear ignores sigma") {
  const Interpolation b = Interpolation::bilinear();
  CHECK(interp_eval(b, 0.25, 7.0) == interp_eval(b, 0.25, 0.0));
  CHECK(interp_eval(b, 0.25, 0.0) == 0.75);
  CHECK(interp_grad(b, 0.25, 3.0).d_dsigma_raw == 0.0);
}

TEST_CASE("partials at the documented points") {
  const InterpPartials g0 = interp_grad(Interpolation::gauss(), 0.0, 0.0);
  CHECK(g0.d_dx == 0.0);
  CHECK(g0.d_dsigma_raw == 0.0);

  const InterpPartials t = interp_grad(Interpolation::triangle(), 0.5, 0.5);
  CHECK(t.d_dx == -1.0);
  CHECK(t.d_dsigma_raw == 1.0);
  const InterpPartials tn = interp_grad(Interpolation::triangle(), -0.5, -0.5);
  CHECK(tn.d_dx == 1.0);
  CHECK(tn.d_dsigma_raw == -1.0);

  // Kinks take subgradient 0.
  CHECK(interp_grad(Interpolation::triangle(), 0.0, 0.5).d_dx == 0.0);
  const InterpPartials edge = interp_grad(Interpolation::triangle(), 1.5, 0.5);
  CHECK(edge.d_dx == 0.0);
  CHECK(edge.d_dsigma_raw == 0.0);

  const Interpolation gauss = Interpolation::gauss();
  const double h = 1e-5;
  const double ndx = (gauss_eval(0.5 + h, 0.23) - gauss_eval(0.5 - h, 0.23)) / (2 * h);
  const double nds = (gauss_eval(0.5, 0.23 + h) - gauss_eval(0.5, 0.23 - h)) / (2 * h);
  const InterpPartials g = interp_grad(gauss, 0.5, 0.23);
  CHECK(relative_error(g.d_dx, ndx) < 1e-6);
  CHECK(relative_error(g.d_dsigma_raw, nds) < 1e-6);
}

TEST_CASE("interp_sample agrees with separate calls") {
  const Interpolation gauss = Interpolation::gauss();
  const InterpSample s = interp_sample(gauss, 0.7, -0.4);
  const InterpPartials p = interp_grad(gauss, 0.7, -0.4);
  CHECK(s.value == interp_eval(gauss, 0.7, -0.4));
  CHECK(s.d_dx == p.d_dx);
  CHECK(s.d_dsigma_raw == p.d_dsigma_raw);
}

TEST_CASE("symmetry, monotonicity and support") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x_dist(-6.0, 6.0), s_dist(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = x_dist(rng), s = s_dist(rng);
    for (const Interpolation& k :
         {Interpolation::bilinear(), Interpolation::triangle(), Interpolation::gauss()}) {
      CHECK(interp_eval(k, x, s) == interp_eval(k, -x, s));
      const double grown = std::abs(s) + 0.1;
      CHECK(interp_eval(k, x, grown) >= interp_eval(k, x, std::abs(s)));
    }
    const double eff = 1.0 + std::abs(s);
    CHECK((triangle_eval(x, s) == 0.0) == (std::abs(x) >= eff));
  }
}

TEST_CASE("partials match finite differences away from kinks") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x_dist(-4.0, 4.0), s_dist(-2.0, 2.0);
  const double h = 1e-5;
  int checked = 0;
  while (checked < 1000) {
    const double x = x_dist(rng), s = s_dist(rng);
    const double eff = 1.0 + std::abs(s);
    if (std::abs(std::abs(x) - eff) < 1e-3 || std::abs(x) < 1e-3 ||
        std::abs(s) < 1e-3)
      continue;
    ++checked;
    for (const Interpolation& k : {Interpolation::triangle(), Interpolation::gauss()}) {
      const InterpPartials p = interp_grad(k, x, s);
      const double ndx = (interp_eval(k, x + h, s) - interp_eval(k, x - h, s)) / (2 * h);
      const double nds = (interp_eval(k, x, s + h) - interp_eval(k, x, s - h)) / (2 * h);
      CHECK(relative_error(p.d_dx, ndx) < 1e-6);
      CHECK(relative_error(p.d_dsigma_raw, nds) < 1e-6);
    }
  }
}
