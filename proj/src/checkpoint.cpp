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

#include "checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "error.hpp"

namespace dcls {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint encoding assumes a little-endian host");

constexpr char kMagic[8] = {'D', 'C', 'L', 'S', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  template <typename T>
  void pod(T v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    out_.append(p, sizeof v);
  }
  void str(const std::string& s) {
    pod<std::uint64_t>(s.size());
    out_.append(s);
  }
  void tensor(const Tensor& t) {
    pod<std::uint64_t>(t.rank());
    for (std::size_t d : t.shape()) pod<std::uint64_t>(d);
    out_.append(reinterpret_cast<const char*>(t.data()), t.size() * sizeof(double));
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}

  template <typename T>
  T pod() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof v);
    pos_ += sizeof v;
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint64_t>();
    need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Tensor tensor() {
    const auto rank = pod<std::uint64_t>();
    DCLS_CHECK(rank <= 8, ErrorCode::kFormat, "checkpoint tensor rank too large");
    Shape shape;
    for (std::uint64_t i = 0; i < rank; ++i) shape.push_back(pod<std::uint64_t>());
    const std::size_t n = shape_numel(shape);
    need(n * sizeof(double));
    std::vector<double> values(n);
    std::memcpy(values.data(), in_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
    return Tensor(std::move(shape), std::move(values));
  }
  void expect(const char* p, std::size_t n) {
    need(n);
    DCLS_CHECK(std::memcmp(in_.data() + pos_, p, n) == 0, ErrorCode::kFormat,
               "not a DCLS checkpoint (bad magic)");
    pos_ += n;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    DCLS_CHECK(pos_ + n <= in_.size(), ErrorCode::kFormat,
               "truncated checkpoint");
  }
  const std::string& in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const Checkpoint& ckpt) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.pod<std::uint32_t>(kCheckpointVersion);
  w.str(ckpt.config_text);
  w.str(ckpt.rng_state);
  w.pod<std::int64_t>(ckpt.epoch);
  w.pod<std::uint64_t>(ckpt.params.size());
  for (const Parameter& p : ckpt.params) {
    w.str(p.name);
    w.pod<std::uint8_t>(static_cast<std::uint8_t>(p.kind));
    w.tensor(p.value);
  }
  w.pod<std::int64_t>(ckpt.optimizer.step);
  DCLS_CHECK(ckpt.optimizer.first_moment.size() ==
                 ckpt.optimizer.second_moment.size(),
             ErrorCode::kInternal, "optimizer moment lists differ in length");
  w.pod<std::uint64_t>(ckpt.optimizer.first_moment.size());
  for (std::size_t i = 0; i < ckpt.optimizer.first_moment.size(); ++i) {
    w.tensor(ckpt.optimizer.first_moment[i]);
    w.tensor(ckpt.optimizer.second_moment[i]);
  }
  return w.take();
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  Reader r(bytes);
  r.expect(kMagic, sizeof kMagic);
  const auto version = r.pod<std::uint32_t>();
  DCLS_CHECK(version == kCheckpointVersion, ErrorCode::kFormat,
             "unsupported checkpoint version " + std::to_string(version));
  Checkpoint c;
  c.config_text = r.str();
  c.rng_state = r.str();
  c.epoch = r.pod<std::int64_t>();
  const auto n = r.pod<std::uint64_t>();
  for (std::uint64_t i = 0; i < n; ++i) {
    Parameter p;
    p.name = r.str();
    const auto kind = r.pod<std::uint8_t>();
    DCLS_CHECK(kind <= static_cast<std::uint8_t>(ParamKind::kOther),
               ErrorCode::kFormat, "bad parameter kind in checkpoint");
    p.kind = static_cast<ParamKind>(kind);
    p.value = r.tensor();
    p.grad = Tensor(p.value.shape());
    c.params.push_back(std::move(p));
  }
  c.optimizer.step = r.pod<std::int64_t>();
  const auto moments = r.pod<std::uint64_t>();
  for (std::uint64_t i = 0; i < moments; ++i) {
    c.optimizer.first_moment.push_back(r.tensor());
    c.optimizer.second_moment.push_back(r.tensor());
  }
  DCLS_CHECK(r.done(), ErrorCode::kFormat, "trailing bytes in checkpoint");
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const std::string bytes = encode_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary);
  DCLS_CHECK(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  DCLS_CHECK(out.good(), ErrorCode::kIo, "short write to " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  DCLS_CHECK(in.good(), ErrorCode::kIo, "cannot open checkpoint " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in),
                          std::istreambuf_iterator<char>()};
  return decode_checkpoint(bytes);
}

void restore_params(ParamStore& store, const ParamStore& saved) {
  DCLS_CHECK(store.size() == saved.size(), ErrorCode::kFormat,
             "checkpoint has " + std::to_string(saved.size()) +
                 " parameters, model has " + std::to_string(store.size()));
  for (std::size_t i = 0; i < store.size(); ++i) {
    DCLS_CHECK(store[i].name == saved[i].name &&
                   store[i].value.shape() == saved[i].value.shape(),
               ErrorCode::kFormat,
               "checkpoint parameter '" + saved[i].name + "' " +
                   shape_str(saved[i].value.shape()) +
                   " does not match model parameter '" + store[i].name + "' " +
                   shape_str(store[i].value.shape()));
    store[i].value = saved[i].value;
  }
}

}  // namespace dcls
