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

#include "data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

#include "error.hpp"

namespace dcls {
namespace {

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  DCLS_CHECK(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& buf, std::size_t at,
                        const std::filesystem::path& path) {
  DCLS_CHECK(at + 4 <= buf.size(), ErrorCode::kFormat,
             "truncated IDX header in " + path.string());
  return (std::uint32_t{buf[at]} << 24) | (std::uint32_t{buf[at + 1]} << 16) |
         (std::uint32_t{buf[at + 2]} << 8) | std::uint32_t{buf[at + 3]};
}

void put_be32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), v);
  DCLS_CHECK(ec == std::errc() && ptr == cell.data() + cell.size() &&
                 !cell.empty(),
             ErrorCode::kFormat,
             "line " + std::to_string(line_no) + ": non-numeric cell '" +
                 cell + "'");
  return v;
}

void draw_dot(double* img, int size, int x, int y) {
  auto put = [&](int xx, int yy, double v) {
    if (xx < 0 || yy < 0 || xx >= size || yy >= size) return;
    double& px = img[yy * size + xx];
    px = std::max(px, v);
  };
  put(x, y, 1.0);
  put(x - 1, y, 0.5);
  put(x + 1, y, 0.5);
  put(x, y - 1, 0.5);
  put(x, y + 1, 0.5);
}

}  // namespace

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  const std::size_t per = images.size() / std::max<std::size_t>(size(), 1);
  Shape shape = images.shape();
  shape[0] = indices.size();
  Dataset out;
  out.images = Tensor(shape);
  out.classes = classes;
  out.source = source;
  out.labels.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t src = indices[i];
    DCLS_CHECK(src < size(), ErrorCode::kInvalidArgument,
               "subset index out of range");
    std::copy_n(images.data() + src * per, per, out.images.data() + i * per);
    out.labels.push_back(labels[src]);
  }
  return out;
}

void Dataset::validate() const {
  DCLS_CHECK(images.rank() == 4, ErrorCode::kShapeMismatch,
             "dataset images must be [N, C, H, W], got " +
                 shape_str(images.shape()));
  DCLS_CHECK(!labels.empty() && images.dim(0) == labels.size(),
             ErrorCode::kShapeMismatch,
             "dataset has " + std::to_string(images.dim(0)) + " images and " +
                 std::to_string(labels.size()) + " labels");
  DCLS_CHECK(classes > 0, ErrorCode::kInvalidArgument,
             "dataset class count must be positive");
  for (int l : labels)
    DCLS_CHECK(l >= 0 && l < classes, ErrorCode::kFormat,
               "label " + std::to_string(l) + " outside [0, " +
                   std::to_string(classes) + ")");
  DCLS_CHECK(images.all_finite(), ErrorCode::kNonFinite,
             "dataset contains non-finite pixels");
}

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
  const auto img = read_file(images_path);
  const auto lab = read_file(labels_path);

  DCLS_CHECK(img.size() >= 16, ErrorCode::kFormat,
             "truncated IDX image file " + images_path.string());
  DCLS_CHECK(read_be32(img, 0, images_path) == kIdxImagesMagic,
             ErrorCode::kFormat, "bad IDX image magic in " + images_path.string());
  const std::size_t n = read_be32(img, 4, images_path);
  const std::size_t h = read_be32(img, 8, images_path);
  const std::size_t w = read_be32(img, 12, images_path);
  DCLS_CHECK(img.size() >= 16 + n * h * w, ErrorCode::kFormat,
             "truncated IDX image payload in " + images_path.string());

  DCLS_CHECK(lab.size() >= 8, ErrorCode::kFormat,
             "truncated IDX label file " + labels_path.string());
  DCLS_CHECK(read_be32(lab, 0, labels_path) == kIdxLabelsMagic,
             ErrorCode::kFormat, "bad IDX label magic in " + labels_path.string());
  const std::size_t nl = read_be32(lab, 4, labels_path);
  DCLS_CHECK(lab.size() >= 8 + nl, ErrorCode::kFormat,
             "truncated IDX label payload in " + labels_path.string());
  DCLS_CHECK(nl == n, ErrorCode::kShapeMismatch,
             "IDX image count " + std::to_string(n) + " != label count " +
                 std::to_string(nl));
  DCLS_CHECK(n > 0 && h > 0 && w > 0, ErrorCode::kFormat, "empty IDX dataset");

  Dataset d;
  d.images = Tensor({n, 1, h, w});
  for (std::size_t i = 0; i < n * h * w; ++i) d.images[i] = img[16 + i] / 255.0;
  int max_label = 0;
  for (std::size_t i = 0; i < n; ++i) {
    d.labels.push_back(lab[8 + i]);
    max_label = std::max(max_label, d.labels.back());
  }
  d.classes = max_label + 1;
  d.source = "idx:" + images_path.string();
  d.validate();
  return d;
}

void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path) {
  DCLS_CHECK(data.channels() == 1, ErrorCode::kInvalidArgument,
             "IDX export supports single-channel images only");
  std::ofstream img(images_path, std::ios::binary);
  std::ofstream lab(labels_path, std::ios::binary);
  DCLS_CHECK(img.good() && lab.good(), ErrorCode::kIo, "cannot write IDX files");
  put_be32(img, kIdxImagesMagic);
  put_be32(img, static_cast<std::uint32_t>(data.size()));
  put_be32(img, static_cast<std::uint32_t>(data.height()));
  put_be32(img, static_cast<std::uint32_t>(data.width()));
  for (double v : data.images.values()) {
    const long q = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
    img.put(static_cast<char>(q));
  }
  put_be32(lab, kIdxLabelsMagic);
  put_be32(lab, static_cast<std::uint32_t>(data.size()));
  for (int l : data.labels) lab.put(static_cast<char>(l));
}

Dataset load_csv(const std::filesystem::path& path, int height, int width,
                 int classes) {
  DCLS_CHECK(height > 0 && width > 0, ErrorCode::kInvalidArgument,
             "CSV image height and width must be positive");
  std::ifstream in(path);
  DCLS_CHECK(in.good(), ErrorCode::kIo, "cannot open " + path.string());

  const std::size_t pixels = static_cast<std::size_t>(height) * width;
  std::vector<double> values;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto cells = split_cells(line);
    if (!seen_data && !cells.empty() && cells[0] == "label") {
      seen_data = true;
      continue;
    }
    seen_data = true;
    DCLS_CHECK(cells.size() == pixels + 1, ErrorCode::kFormat,
               "line " + std::to_string(line_no) + ": expected " +
                   std::to_string(pixels + 1) + " cells, got " +
                   std::to_string(cells.size()));
    const double label = parse_number(cells[0], line_no);
    DCLS_CHECK(label >= 0 && label == std::floor(label), ErrorCode::kFormat,
               "line " + std::to_string(line_no) + ": label must be a "
               "non-negative integer");
    labels.push_back(static_cast<int>(label));
    for (std::size_t i = 1; i < cells.size(); ++i)
      values.push_back(parse_number(cells[i], line_no));
  }
  DCLS_CHECK(!labels.empty(), ErrorCode::kFormat,
             "no samples in " + path.string());

  Dataset d;
  const std::size_t n = labels.size();
  d.images = Tensor({n, 1, static_cast<std::size_t>(height),
                     static_cast<std::size_t>(width)},
                    std::move(values));
  d.labels = std::move(labels);
  d.classes = classes > 0
                  ? classes
                  : *std::max_element(d.labels.begin(), d.labels.end()) + 1;
  d.source = "csv:" + path.string();
  d.validate();
  return d;
}

void write_csv(const Dataset& data, const std::filesystem::path& path,
               const std::string& comment) {
  DCLS_CHECK(data.channels() == 1, ErrorCode::kInvalidArgument,
             "CSV export supports single-channel images only");
  std::ofstream out(path);
  DCLS_CHECK(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  if (!comment.empty()) out << "# " << comment << '\n';
  const std::size_t pixels = data.height() * data.width();
  out << "label";
  for (std::size_t i = 0; i < pixels; ++i) out << ",p" << i;
  out << '\n';
  char buf[32];
  for (std::size_t s = 0; s < data.size(); ++s) {
    out << data.labels[s];
    const double* px = data.images.data() + s * pixels;
    for (std::size_t i = 0; i < pixels; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", px[i]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

Dataset synth_longrange(const SynthOptions& options) {
  DCLS_CHECK(options.size >= 16, ErrorCode::kInvalidArgument,
             "synthetic image size must be >= 16, got " +
                 std::to_string(options.size));
  DCLS_CHECK(options.classes >= 1 && options.n > 0, ErrorCode::kInvalidArgument,
             "synthetic dataset needs n > 0 and classes >= 1");

  constexpr double kPi = std::numbers::pi;
  constexpr double kBoundaryMargin = 3.0 * kPi / 180.0;
  const int size = options.size;
  const double bin = kPi / options.classes;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle_dist(0.0, kPi);
  std::uniform_real_distribution<double> sep_dist(size / 3.0, size / 2.0);
  std::uniform_real_distribution<double> noise_dist(0.0, 1.0);

  Dataset d;
  const auto sz = static_cast<std::size_t>(size);
  d.images = Tensor({options.n, 1, sz, sz});
  d.classes = options.classes;
  d.source = "synth_longrange";
  d.labels.reserve(options.n);

  for (std::size_t s = 0; s < options.n; ++s) {
    int dx = 0, dy = 0, label = 0;
    while (true) {
      const double theta = angle_dist(rng);
      const double sep = sep_dist(rng);
      dx = static_cast<int>(std::lround(sep * std::cos(theta)));
      dy = static_cast<int>(std::lround(sep * std::sin(theta)));
      if (dy < 0 || (dy == 0 && dx < 0)) {
        dx = -dx;
        dy = -dy;
      }
      if (dx == 0 && dy == 0) continue;
      const double a = std::atan2(static_cast<double>(dy), static_cast<double>(dx));
      const double pos = a / bin;
      const double frac = pos - std::floor(pos);
      if (std::min(frac, 1.0 - frac) * bin < kBoundaryMargin) continue;
      label = std::min(static_cast<int>(pos), options.classes - 1);
      if (std::abs(dx) <= size - 3 && std::abs(dy) <= size - 3) break;
    }

    // Both dot centers stay at least one pixel away from the border.
    std::uniform_int_distribution<int> xs(1 - std::min(0, dx),
                                          size - 2 - std::max(0, dx));
    std::uniform_int_distribution<int> ys(1 - std::min(0, dy),
                                          size - 2 - std::max(0, dy));
    const int x0 = xs(rng);
    const int y0 = ys(rng);

    double* img = d.images.data() + s * sz * sz;
    for (std::size_t i = 0; i < sz * sz; ++i) {
      const double u = noise_dist(rng);
      img[i] = options.noise_free ? 0.0 : options.noise * u;
    }
    draw_dot(img, size, x0, y0);
    draw_dot(img, size, x0 + dx, y0 + dy);
    d.labels.push_back(label);
  }
  return d;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data,
                                          double val_fraction,
                                          std::uint64_t seed) {
  DCLS_CHECK(val_fraction >= 0.0 && val_fraction < 1.0,
             ErrorCode::kInvalidArgument,
             "validation fraction must be in [0, 1)");
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_val =
      static_cast<std::size_t>(std::floor(val_fraction * data.size()));
  DCLS_CHECK(n_val < data.size(), ErrorCode::kInvalidArgument,
             "validation split leaves no training samples");
  std::vector<std::size_t> val(order.begin(), order.begin() + n_val);
  std::vector<std::size_t> train(order.begin() + n_val, order.end());
  return {data.subset(train), data.subset(val)};
}

void standardize(Dataset& data, const Dataset& reference) {
  const std::size_t c = reference.channels();
  DCLS_CHECK(data.channels() == c, ErrorCode::kShapeMismatch,
             "standardize: channel count mismatch");
  const std::size_t plane = reference.height() * reference.width();
  for (std::size_t ch = 0; ch < c; ++ch) {
    double sum = 0.0, sq = 0.0;
    std::size_t count = 0;
    for (std::size_t s = 0; s < reference.size(); ++s) {
      const double* px = reference.images.data() + (s * c + ch) * plane;
      for (std::size_t i = 0; i < plane; ++i) {
        sum += px[i];
        sq += px[i] * px[i];
      }
      count += plane;
    }
    const double mean = sum / count;
    const double var = std::max(sq / count - mean * mean, 0.0);
    const double inv = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (std::size_t s = 0; s < data.size(); ++s) {
      double* px = data.images.data() + (s * c + ch) * plane;
      for (std::size_t i = 0; i < plane; ++i) px[i] = (px[i] - mean) * inv;
    }
  }
}

}  // namespace dcls
