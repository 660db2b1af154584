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
#include "error.hpp"
#include "gradcheck.hpp"
#include "kernelgen.hpp"
#include "testkit.hpp"

using namespace dcls;
namespace tk = dcls::testkit;

namespace {

DclsParams single(const DclsGeometry& geom, std::vector<double> p,
                  std::vector<double> s = {}) {
  DclsParams params = DclsParams::zeros(1, 1, geom);
  params.weights[0] = 1.0;
  for (int a = 0; a < geom.rank(); ++a) {
    params.positions[a][0] = p[a];
    params.sigmas[a][0] = s.empty() ? 0.0 : s[a];
  }
  return params;
}

DclsParams random_params(std::size_t c_out, std::size_t c_in,
                         const DclsGeometry& geom, double spread,
                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DclsParams p = DclsParams::zeros(c_out, c_in, geom);
  for (double& v : p.weights.values()) v = u(rng);
  for (Tensor& t : p.positions)
    for (double& v : t.values()) v = spread * u(rng);
  for (Tensor& t : p.sigmas)
    for (double& v : t.values()) v = 0.8 * u(rng);
  return p;
}

tk::Kind oracle_kind(InterpKind k) {
  switch (k) {
    case InterpKind::kBilinear: return tk::Kind::kBilinear;
    case InterpKind::kTriangle: return tk::Kind::kTriangle;
    case InterpKind::kGauss: return tk::Kind::kGauss;
  }
  return tk::Kind::kGauss;
}

std::vector<std::vector<double>> axes(const std::vector<Tensor>& t) {
  std::vector<std::vector<double>> out;
  for (const Tensor& x : t) out.push_back(x.vector());
  return out;
}

}  // namespace

TEST_CASE("bilinear integer position is one cell") {
  const DclsGeometry geom{{3, 3}, 1};
  const Tensor k = construct_kernel(single(geom, {0, 0}), geom, Interpolation::bilinear()).kernel;
  for (std::size_t i = 0; i < 9; ++i)
    CHECK(k[i] == (i == 4 ? 1.0 / (1.0 + 1e-7) : 0.0));
}

TEST_CASE("bilinear half position splits into four quarters") {
  const DclsGeometry geom{{3, 3}, 1};
  const Tensor k = construct_kernel(single(geom, {0.5, 0.5}), geom, Interpolation::bilinear()).kernel;
  const double q = 0.25 / (1.0 + 1e-7);
  for (std::size_t i = 0; i < 9; ++i) {
    const bool corner = i == 4 || i == 5 || i == 7 || i == 8;
    CHECK(k[i] == doctest::Approx(corner ? q : 0.0).epsilon(1e-15));
  }
}

TEST_CASE("bilinear off-centre position against the four-corner oracle") {
  const DclsGeometry geom{{5, 5}, 1};
  const Tensor k = construct_kernel(single(geom, {0.25, -0.75}), geom, Interpolation::bilinear()).kernel;
  const tk::Vec ref = tk::bilinear_oracle({1.0}, {0.25}, {-0.75}, 1, 1, 1, 5, 5);
  for (std::size_t i = 0; i < 25; ++i) CHECK(std::abs(k[i] - ref[i]) < 1e-12);
  CHECK(k[2 * 5 + 1] == doctest::Approx(0.5625 / (1 + 1e-7)).epsilon(1e-14));
  CHECK(k[3 * 5 + 1] == doctest::Approx(0.1875 / (1 + 1e-7)).epsilon(1e-14));
  CHECK(k[2 * 5 + 2] == doctest::Approx(0.1875 / (1 + 1e-7)).epsilon(1e-14));
  CHECK(k[3 * 5 + 2] == doctest::Approx(0.0625 / (1 + 1e-7)).epsilon(1e-14));
}

TEST_CASE("gauss centre to neighbour ratio survives normalization") {
  const DclsGeometry geom{{5, 5}, 1};
  const ConstructedKernel built = construct_kernel(single(geom, {0, 0}), geom, Interpolation::gauss());
  const double ratio = std::exp(-1.0 / (2.0 * 0.27 * 0.27));
  CHECK(built.kernel[2 * 5 + 3] / built.kernel[2 * 5 + 2] == doctest::Approx(ratio).epsilon(1e-12));
  CHECK(built.kernel[1 * 5 + 2] / built.kernel[2 * 5 + 2] == doctest::Approx(ratio).epsilon(1e-12));
  // Before normalization the centre is exactly 1.
  const double centre_raw = 1.0;
  const double neighbour_raw = std::exp(-1.0 / (2.0 * 0.27 * 0.27));
  CHECK(neighbour_raw / centre_raw == doctest::Approx(ratio));
}

TEST_CASE("even dilated size centres at s // 2") {
  const DclsGeometry geom{{4}, 1};
  const Tensor k = construct_kernel(single(geom, {0}), geom, Interpolation::bilinear()).kernel;
  CHECK(k[2] == 1.0 / (1.0 + 1e-7));
  CHECK(k[0] == 0.0);
  CHECK(k[1] == 0.0);
  CHECK(k[3] == 0.0);
}

TEST_CASE("constructor agrees with the direct-evaluation oracle") {
  std::mt19937_64 rng(3);
  for (InterpKind kind : {InterpKind::kBilinear, InterpKind::kTriangle, InterpKind::kGauss}) {
    for (const std::vector<int>& sizes :
         {std::vector<int>{7}, std::vector<int>{5, 4}, std::vector<int>{3, 5, 4}}) {
      const DclsGeometry geom{sizes, 3};
      const DclsParams p = clamp_positions(random_params(2, 2, geom, 2.0, rng), geom,
                                           Interpolation::of(kind));
      const Tensor k = construct_kernel(p, geom, Interpolation::of(kind)).kernel;
      const tk::Vec ref = tk::naive_kernel(oracle_kind(kind), sizes, 3, 2, 2,
                                           p.weights.vector(), axes(p.positions),
                                           axes(p.sigmas));
      REQUIRE(ref.size() == k.size());
      for (std::size_t i = 0; i < k.size(); ++i) CHECK(std::abs(k[i] - ref[i]) < 1e-12);
    }
  }
}

TEST_CASE("zero upstream gradient gives zero gradients") {
  std::mt19937_64 rng(1);
  const DclsGeometry geom{{5, 5}, 3};
  const ConstructedKernel built =
      construct_kernel(random_params(2, 1, geom, 2.0, rng), geom, Interpolation::gauss());
  const DclsParams g = construct_kernel_backward(built, Tensor(built.kernel.shape()));
  for (double v : g.weights.values()) CHECK(v == 0.0);
  for (const Tensor& t : g.positions)
    for (double v : t.values()) CHECK(v == 0.0);
  for (const Tensor& t : g.sigmas)
    for (double v : t.values()) CHECK(v == 0.0);
}

TEST_CASE("centred gauss element has zero position gradient on a centre indicator") {
  const DclsGeometry geom{{5, 5}, 1};
  const ConstructedKernel built = construct_kernel(single(geom, {0, 0}, {0.23, 0.23}), geom,
                                                   Interpolation::gauss());
  Tensor g(built.kernel.shape());
  g[12] = 1.0;
  const DclsParams grads = construct_kernel_backward(built, g);
  CHECK(std::abs(grads.positions[0][0]) < 1e-15);
  CHECK(std::abs(grads.positions[1][0]) < 1e-15);
}

TEST_CASE("gauss backward matches finite differences") {
  std::mt19937_64 rng(17);
  const DclsGeometry geom{{5, 5}, 3};
  const DclsParams p = random_params(1, 1, geom, 2.0, rng);
  const Interpolation gauss = Interpolation::gauss();
  const ConstructedKernel built = construct_kernel(p, geom, gauss);
  std::normal_distribution<double> normal;
  Tensor c(built.kernel.shape());
  for (double& v : c.values()) v = normal(rng);
  const DclsParams analytic = construct_kernel_backward(built, c);

  auto check_tensor = [&](auto&& select, const Tensor& grad) {
    DclsParams p0 = p;
    const tk::Vec x0 = select(p0).vector();
    const tk::Vec numeric = tk::fd_grad(
        [&](const tk::Vec& x) {
          DclsParams q = p;
          select(q) = Tensor(select(q).shape(), x);
          return dot(construct_kernel(q, geom, gauss, false).kernel, c);
        },
        x0);
    for (std::size_t i = 0; i < x0.size(); ++i)
      CHECK(relative_error(grad[i], numeric[i]) < 1e-5);
  };
  check_tensor([](DclsParams& q) -> Tensor& { return q.weights; }, analytic.weights);
  for (int a = 0; a < 2; ++a) {
    check_tensor([a](DclsParams& q) -> Tensor& { return q.positions[a]; }, analytic.positions[a]);
    check_tensor([a](DclsParams& q) -> Tensor& { return q.sigmas[a]; }, analytic.sigmas[a]);
  }
}

TEST_CASE("backward without a cache is rejected") {
  const DclsGeometry geom{{3, 3}, 1};
  const ConstructedKernel built =
      construct_kernel(single(geom, {0, 0}), geom, Interpolation::gauss(), false);
  try {
    construct_kernel_backward(built, Tensor(built.kernel.shape()));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingCache);
  }
}

TEST_CASE("bilinear sigma gradient is zero") {
  std::mt19937_64 rng(2);
  const DclsGeometry geom{{5, 5}, 2};
  const Interpolation b = Interpolation::bilinear();
  const ConstructedKernel built =
      construct_kernel(clamp_positions(random_params(1, 1, geom, 1.5, rng), geom, b), geom, b);
  Tensor g(built.kernel.shape(), 1.0);
  const DclsParams grads = construct_kernel_backward(built, g);
  for (const Tensor& t : grads.sigmas)
    for (double v : t.values()) CHECK(v == 0.0);
}

TEST_CASE("shape and value errors") {
  const DclsGeometry geom{{3, 3}, 2};
  DclsParams p = DclsParams::zeros(1, 1, geom);
  p.positions.pop_back();
  CHECK_THROWS_AS(construct_kernel(p, geom, Interpolation::gauss()), Error);

  DclsParams q = DclsParams::zeros(1, 1, geom);
  q.weights[0] = std::nan("");
  try {
    construct_kernel(q, geom, Interpolation::gauss());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonFinite);
  }

  const DclsGeometry bad{{0, 3}, 1};
  CHECK_THROWS_AS(bad.validate(), Error);
  const DclsGeometry bad_rank{{3, 3, 3, 3}, 1};
  CHECK_THROWS_AS(bad_rank.validate(), Error);
}

TEST_CASE("clamping policy") {
  const DclsGeometry geom{{5}, 1};
  DclsParams p = single(geom, {7.3});
  CHECK(clamp_positions(p, geom, Interpolation::bilinear()).positions[0][0] == 2.0 - 1e-6);
  p.positions[0][0] = -9.0;
  CHECK(clamp_positions(p, geom, Interpolation::bilinear()).positions[0][0] == -2.0);
  p.positions[0][0] = 7.3;
  CHECK(clamp_positions(p, geom, Interpolation::gauss()) == p);
  CHECK(clamp_positions(p, geom, Interpolation::triangle()) == p);

  const DclsGeometry unit{{1}, 1};
  DclsParams u = single(unit, {0.4});
  CHECK(clamp_positions(u, unit, Interpolation::bilinear()).positions[0][0] == 0.0);
}

TEST_CASE("triangle far outside the grid stays finite") {
  const DclsGeometry geom{{5, 5}, 1};
  const DclsParams p = single(geom, {40.0, -40.0});
  const ConstructedKernel built = construct_kernel(p, geom, Interpolation::triangle());
  for (double v : built.kernel.values()) CHECK(v == 0.0);
  const DclsParams g = construct_kernel_backward(built, Tensor(built.kernel.shape(), 1.0));
  CHECK(g.weights.all_finite());
  CHECK(g.positions[0].all_finite());
  CHECK(g.sigmas[1].all_finite());
}

TEST_CASE("cached maps are normalized") {
  std::mt19937_64 rng(9);
  const DclsGeometry geom{{7, 7}, 4};
  for (InterpKind kind : {InterpKind::kBilinear, InterpKind::kTriangle, InterpKind::kGauss}) {
    const Interpolation interp = Interpolation::of(kind);
    const ConstructedKernel built =
        construct_kernel(clamp_positions(random_params(2, 2, geom, 3.0, rng), geom, interp),
                         geom, interp);
    for (std::size_t pair = 0; pair < built.pairs(); ++pair) {
      for (std::size_t k = 0; k < 4; ++k) {
        const double raw = built.map_sum(pair, k);
        if (raw <= 1e-3) continue;
        double s = 0.0;
        for (double v : built.map(pair, k)) s += v;
        CHECK(s > 1.0 - 1e-6);
        CHECK(s <= 1.0);
        CHECK(s == doctest::Approx(raw / (raw + 1e-7)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("kernel is linear in the weights") {
  std::mt19937_64 rng(4);
  const DclsGeometry geom{{5, 5}, 3};
  DclsParams p = random_params(2, 1, geom, 2.0, rng);
  const Tensor k1 = construct_kernel(p, geom, Interpolation::gauss()).kernel;
  p.weights *= 2.0;
  const Tensor k2 = construct_kernel(p, geom, Interpolation::gauss()).kernel;
  for (std::size_t i = 0; i < k1.size(); ++i) CHECK(k2[i] == 2.0 * k1[i]);
}

TEST_CASE("integer translation shifts the map") {
  const DclsGeometry geom{{9, 9}, 1};
  const Interpolation gauss = Interpolation::gauss();
  const Tensor a = construct_kernel(single(geom, {-1.3, 0.2}, {0.1, 0.05}), geom, gauss).kernel;
  const Tensor b = construct_kernel(single(geom, {0.7, -0.8}, {0.1, 0.05}), geom, gauss).kernel;
  // shift by d = (2, -1)
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      const int si = i + 2, sj = j - 1;
      if (si < 0 || si >= 9 || sj < 0 || sj >= 9) continue;
      CHECK(std::abs(b[static_cast<std::size_t>(si * 9 + sj)] -
                     a[static_cast<std::size_t>(i * 9 + j)]) < 1e-9);
    }
}

TEST_CASE("a degenerate second axis reproduces the 1-D kernel") {
  std::mt19937_64 rng(8);
  for (InterpKind kind : {InterpKind::kBilinear, InterpKind::kTriangle, InterpKind::kGauss}) {
    const Interpolation interp = Interpolation::of(kind);
    const DclsGeometry g1{{7}, 3};
    const DclsGeometry g2{{7, 1}, 3};
    const DclsParams p1 = clamp_positions(random_params(2, 3, g1, 2.5, rng), g1, interp);
    DclsParams p2 = DclsParams::zeros(2, 3, g2);
    p2.weights = p1.weights;
    p2.positions[0] = p1.positions[0];
    p2.sigmas[0] = p1.sigmas[0];
    const Tensor k1 = construct_kernel(p1, g1, interp).kernel;
    const Tensor k2 = construct_kernel(p2, g2, interp).kernel;
    CHECK(k1.vector() == k2.vector());
  }
}
