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


#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "data.hpp"
#include "doctest.h"
#include "error.hpp"
#include "temp_dir.hpp"

using namespace dcls;
using dcls::test::TempDir;
using dcls::test::write_bytes;

namespace {

std::string be32(std::uint32_t v) {
  return {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
          static_cast<char>(v >> 8), static_cast<char>(v)};
}

std::string idx_images(std::uint32_t n, std::uint32_t h, std::uint32_t w,
                       const std::string& pixels) {
  return be32(kIdxImagesMagic) + be32(n) + be32(h) + be32(w) + pixels;
}

std::string idx_labels(const std::string& labels) {
  return be32(kIdxLabelsMagic) + be32(static_cast<std::uint32_t>(labels.size())) + labels;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("IDX pair from hand-written bytes") {
  TempDir dir;
  std::string px;
  for (int i = 0; i < 18; ++i) px.push_back(static_cast<char>(i * 15));
  write_bytes(dir / "img", idx_images(2, 3, 3, px));
  write_bytes(dir / "lab", idx_labels(std::string{'\x01', '\x03'}));
  const Dataset d = load_idx(dir / "img", dir / "lab");
  REQUIRE(d.size() == 2);
  CHECK(d.images.shape() == Shape{2, 1, 3, 3});
  CHECK(d.labels == std::vector<int>{1, 3});
  for (int i = 0; i < 18; ++i) CHECK(d.images[static_cast<std::size_t>(i)] == (i * 15) / 255.0);
}

TEST_CASE("IDX errors") {
  TempDir dir;
  const std::string px(9, '\x10');
  write_bytes(dir / "img", idx_images(1, 3, 3, px));
  write_bytes(dir / "lab1", idx_labels("\x02"));
  SUBCASE("empty file") {
    write_bytes(dir / "empty", "");
    CHECK(code_of([&] { load_idx(dir / "empty", dir / "lab1"); }) == ErrorCode::kFormat);
  }
  SUBCASE("truncated pixels") {
    write_bytes(dir / "short", idx_images(2, 3, 3, px));
    CHECK(code_of([&] { load_idx(dir / "short", dir / "lab1"); }) == ErrorCode::kFormat);
  }
  SUBCASE("bad magic") {
    write_bytes(dir / "bad", be32(0x00000804) + be32(1) + be32(3) + be32(3) + px);
    CHECK(code_of([&] { load_idx(dir / "bad", dir / "lab1"); }) == ErrorCode::kFormat);
    CHECK(code_of([&] { load_idx(dir / "img", dir / "img"); }) == ErrorCode::kFormat);
  }
  SUBCASE("count mismatch") {
    write_bytes(dir / "lab2", idx_labels("\x02\x01"));
    CHECK(code_of([&] { load_idx(dir / "img", dir / "lab2"); }) == ErrorCode::kShapeMismatch);
  }
  SUBCASE("missing file") {
    CHECK(code_of([&] { load_idx(dir / "nope", dir / "lab1"); }) == ErrorCode::kIo);
  }
}

TEST_CASE("IDX write and read back") {
  TempDir dir;
  SynthOptions o;
  o.n = 5;
  o.size = 16;
  Dataset d = synth_longrange(o);
  for (double& v : d.images.values()) v = std::round(v * 255.0) / 255.0;
  write_idx(d, dir / "img", dir / "lab");
  const Dataset r = load_idx(dir / "img", dir / "lab");
  CHECK(r.labels == d.labels);
  CHECK(r.images == d.images);
}

TEST_CASE("CSV from hand-written text") {
  TempDir dir;
  write_bytes(dir / "a.csv", "# two images\nlabel,p0,p1,p2,p3\n2,0,0.5,1,0.25\n0,1,1,0,0\n");
  const Dataset d = load_csv(dir / "a.csv", 2, 2);
  CHECK(d.labels == std::vector<int>{2, 0});
  CHECK(d.classes == 3);
  CHECK(d.images.vector() == std::vector<double>{0, 0.5, 1, 0.25, 1, 1, 0, 0});
}

TEST_CASE("CSV errors") {
  TempDir dir;
  write_bytes(dir / "short.csv", "1,0,0,0\n");
  CHECK(code_of([&] { load_csv(dir / "short.csv", 2, 2); }) == ErrorCode::kFormat);
  write_bytes(dir / "nan.csv", "1,0,x,0,0\n");
  CHECK(code_of([&] { load_csv(dir / "nan.csv", 2, 2); }) == ErrorCode::kFormat);
  write_bytes(dir / "empty.csv", "");
  CHECK(code_of([&] { load_csv(dir / "empty.csv", 2, 2); }) == ErrorCode::kFormat);
  write_bytes(dir / "neg.csv", "-1,0,0,0,0\n");
  CHECK(code_of([&] { load_csv(dir / "neg.csv", 2, 2); }) == ErrorCode::kFormat);
}

TEST_CASE("CSV round trip") {
  TempDir dir;
  SynthOptions o;
  o.n = 20;
  o.size = 16;
  o.seed = 4;
  const Dataset d = synth_longrange(o);
  write_csv(d, dir / "d.csv", "roundtrip");
  const Dataset r = load_csv(dir / "d.csv", 16, 16, d.classes);
  CHECK(r.labels == d.labels);
  for (std::size_t i = 0; i < d.images.size(); ++i)
    CHECK(std::abs(r.images[i] - d.images[i]) <= 1e-9);
}

TEST_CASE("synthetic generator") {
  SynthOptions o;
  o.n = 4000;
  o.seed = 11;
  const Dataset a = synth_longrange(o);
  SUBCASE("deterministic") {
    const Dataset b = synth_longrange(o);
    CHECK(a.images == b.images);
    CHECK(a.labels == b.labels);
    o.seed = 12;
    CHECK_FALSE(synth_longrange(o).labels == a.labels);
  }
  SUBCASE("balanced classes") {
    std::map<int, int> hist;
    for (int l : a.labels) ++hist[l];
    REQUIRE(hist.size() == 4);
    for (const auto& [label, count] : hist) {
      const double f = count / 4000.0;
      CHECK(f >= 0.2);
      CHECK(f <= 0.3);
    }
  }
  SUBCASE("pixels in range") {
    const auto [lo, hi] = std::minmax_element(a.images.values().begin(),
                                              a.images.values().end());
    CHECK(*lo >= 0.0);
    CHECK(*hi == 1.0);
  }
  SUBCASE("size precondition") {
    o.size = 15;
    CHECK_THROWS_AS(synth_longrange(o), Error);
  }
}

TEST_CASE("noise-free labels are recoverable by nearest centroid on the dot offset") {
  SynthOptions o;
  o.n = 2000;
  o.seed = 5;
  o.noise_free = true;
  const Dataset d = synth_longrange(o);
  const auto size = static_cast<std::size_t>(o.size);
  // Feature: unit vector at twice the dot-to-dot angle, which is
  // invariant to the order of the two dots.
  std::vector<std::pair<double, double>> feat;
  for (std::size_t s = 0; s < d.size(); ++s) {
    std::vector<std::pair<int, int>> centers;
    for (std::size_t i = 0; i < size * size; ++i)
      if (d.images[s * size * size + i] == 1.0)
        centers.emplace_back(static_cast<int>(i % size), static_cast<int>(i / size));
    REQUIRE(centers.size() == 2);
    const double a = std::atan2(centers[1].second - centers[0].second,
                                centers[1].first - centers[0].first);
    feat.emplace_back(std::cos(2 * a), std::sin(2 * a));
  }
  const std::size_t half = d.size() / 2;
  std::vector<std::pair<double, double>> centroid(4, {0.0, 0.0});
  for (std::size_t s = 0; s < half; ++s) {
    centroid[d.labels[s]].first += feat[s].first;
    centroid[d.labels[s]].second += feat[s].second;
  }
  std::size_t correct = 0;
  for (std::size_t s = half; s < d.size(); ++s) {
    int best = 0;
    double best_d = 1e300;
    for (int c = 0; c < 4; ++c) {
      const double n = std::hypot(centroid[c].first, centroid[c].second);
      const double dx = feat[s].first - centroid[c].first / n;
      const double dy = feat[s].second - centroid[c].second / n;
      if (dx * dx + dy * dy < best_d) {
        best_d = dx * dx + dy * dy;
        best = c;
      }
    }
    correct += best == d.labels[s];
  }
  CHECK(correct == d.size() - half);
}

TEST_CASE("split and standardize") {
  SynthOptions o;
  o.n = 100;
  o.size = 16;
  const Dataset d = synth_longrange(o);
  auto [train, val] = split_dataset(d, 0.1, 3);
  CHECK(train.size() == 90);
  CHECK(val.size() == 10);
  auto [t2, v2] = split_dataset(d, 0.1, 3);
  CHECK(t2.labels == train.labels);
  CHECK(v2.images == val.images);
  Dataset ref = train;
  standardize(train, ref);
  double sum = 0.0, sq = 0.0;
  for (double v : train.images.values()) {
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(train.images.size());
  CHECK(std::abs(sum / n) < 1e-9);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(split_dataset(d, 1.0, 3), Error);
}
