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

#include "config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "error.hpp"

namespace dcls {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
  fail(ErrorCode::kConfig, "config key '" + std::string(key) + "': '" +
                               std::string(value) + "' is not " +
                               std::string(expected));
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
    bad_value(key, value, "an integer");
  return v;
}

double parse_real(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
    bad_value(key, value, "a number");
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "a boolean");
}

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

#define DCLS_STRING_FIELD(name, member)                                  \
  Field {                                                                \
    name, [](const RunConfig& c) { return c.member; },                   \
        [](RunConfig& c, std::string_view v) { c.member = std::string(v); } \
  }
#define DCLS_INT_FIELD(name, member, type)                                   \
  Field {                                                                    \
    name, [](const RunConfig& c) { return std::to_string(c.member); },       \
        [](RunConfig& c, std::string_view v) {                               \
          c.member = parse_integer<type>(name, v);                           \
        }                                                                    \
  }
#define DCLS_REAL_FIELD(name, member)                                        \
  Field {                                                                    \
    name, [](const RunConfig& c) { return format_double(c.member); },        \
        [](RunConfig& c, std::string_view v) { c.member = parse_real(name, v); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      DCLS_INT_FIELD("seed", seed, std::uint64_t),

      DCLS_STRING_FIELD("data.source", data.source),
      DCLS_STRING_FIELD("data.images", data.images),
      DCLS_STRING_FIELD("data.labels", data.labels),
      DCLS_STRING_FIELD("data.csv", data.csv),
      DCLS_INT_FIELD("data.height", data.height, int),
      DCLS_INT_FIELD("data.width", data.width, int),
      DCLS_INT_FIELD("data.n", data.n, std::size_t),
      DCLS_INT_FIELD("data.size", data.size, int),
      DCLS_INT_FIELD("data.classes", data.classes, int),
      DCLS_REAL_FIELD("data.noise", data.noise),
      DCLS_REAL_FIELD("data.val_fraction", data.val_fraction),
      Field{"data.standardize",
            [](const RunConfig& c) {
              return std::string(c.data.standardize ? "true" : "false");
            },
            [](RunConfig& c, std::string_view v) {
              c.data.standardize = parse_bool("data.standardize", v);
            }},

      DCLS_STRING_FIELD("model.layers", model.layers),
      Field{"model.interp",
            [](const RunConfig& c) {
              return std::string(interp_name(c.model.interp));
            },
            [](RunConfig& c, std::string_view v) {
              try {
                c.model.interp = parse_interp_kind(v);
              } catch (const Error&) {
                bad_value("model.interp", v, "bilinear, triangle or gauss");
              }
            }},
      DCLS_INT_FIELD("model.kernel_count", model.kernel_count, int),
      DCLS_INT_FIELD("model.dilated_size", model.dilated_size, int),
      DCLS_STRING_FIELD("model.sync", model.sync),
      DCLS_REAL_FIELD("model.position_init_std", model.position_init_std),

      Field{"optim.type",
            [](const RunConfig& c) {
              return std::string(optimizer_name(c.optim.type));
            },
            [](RunConfig& c, std::string_view v) {
              try {
                c.optim.type = parse_optimizer(v);
              } catch (const Error&) {
                bad_value("optim.type", v, "sgd or adamw");
              }
            }},
      DCLS_REAL_FIELD("optim.lr", optim.lr),
      DCLS_REAL_FIELD("optim.weight_decay", optim.weight_decay),
      DCLS_REAL_FIELD("optim.lr_scale_positions", optim.lr_scale_positions),
      DCLS_REAL_FIELD("optim.lr_scale_sigmas", optim.lr_scale_sigmas),
      DCLS_REAL_FIELD("optim.beta1", optim.beta1),
      DCLS_REAL_FIELD("optim.beta2", optim.beta2),
      DCLS_REAL_FIELD("optim.eps", optim.eps),
      DCLS_INT_FIELD("optim.epochs", optim.epochs, int),
      DCLS_INT_FIELD("optim.batch_size", optim.batch_size, int),

      DCLS_INT_FIELD("gradcheck.kernel_cases", gradcheck.kernel_cases, int),
      DCLS_INT_FIELD("gradcheck.layer_cases", gradcheck.layer_cases, int),
      DCLS_STRING_FIELD("gradcheck.kinds", gradcheck.kinds),
      DCLS_REAL_FIELD("gradcheck.step", gradcheck.step),
      DCLS_REAL_FIELD("gradcheck.kernel_tolerance", gradcheck.kernel_tolerance),
      DCLS_REAL_FIELD("gradcheck.layer_tolerance", gradcheck.layer_tolerance),
      DCLS_STRING_FIELD("gradcheck.inject_fault", gradcheck.inject_fault),

      DCLS_STRING_FIELD("compare.seeds", compare.seeds),
  };
  return table;
}

#undef DCLS_STRING_FIELD
#undef DCLS_INT_FIELD
#undef DCLS_REAL_FIELD

const Field& find_field(std::string_view key) {
  for (const Field& f : fields())
    if (key == f.key) return f;
  fail(ErrorCode::kConfig, "unknown config key '" + std::string(key) + "'");
}

}  // namespace

void RunConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  DCLS_CHECK(eq != std::string_view::npos, ErrorCode::kConfig,
             "expected key=value, got '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(std::string_view key, std::string_view value) {
  find_field(key).set(*this, value);
}

std::string RunConfig::get(std::string_view key) const {
  return find_field(key).get(*this);
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const Field& f : fields()) out.emplace_back(f.key);
  return out;
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  std::string section;
  for (const Field& f : fields()) {
    const std::string_view key = f.key;
    const auto dot = key.find('.');
    const std::string sec =
        dot == std::string_view::npos ? "" : std::string(key.substr(0, dot));
    const std::string name =
        dot == std::string_view::npos ? std::string(key)
                                      : std::string(key.substr(dot + 1));
    if (sec != section) {
      out << "\n[" << sec << "]\n";
      section = sec;
    }
    out << name << " = " << f.get(*this) << '\n';
  }
  return out.str();
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig c;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      DCLS_CHECK(line.back() == ']', ErrorCode::kConfig,
                 "line " + std::to_string(line_no) + ": unterminated section");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    DCLS_CHECK(eq != std::string::npos, ErrorCode::kConfig,
               "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    c.set(section.empty() ? key : section + "." + key, value);
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  DCLS_CHECK(in.good(), ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss{std::string(text)};
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const std::string t = trim(cell);
    if (t.empty()) continue;
    seeds.push_back(parse_integer<std::uint64_t>("seed list", t));
  }
  DCLS_CHECK(!seeds.empty(), ErrorCode::kConfig, "empty seed list");
  return seeds;
}

std::vector<InterpKind> parse_kind_list(std::string_view text) {
  std::vector<InterpKind> kinds;
  std::stringstream ss{std::string(text)};
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const std::string t = trim(cell);
    if (t.empty()) continue;
    if (t == "all") {
      kinds = {InterpKind::kBilinear, InterpKind::kTriangle, InterpKind::kGauss};
      continue;
    }
    try {
      kinds.push_back(parse_interp_kind(t));
    } catch (const Error&) {
      bad_value("kind list", t, "bilinear, triangle, gauss or all");
    }
  }
  DCLS_CHECK(!kinds.empty(), ErrorCode::kConfig, "empty interpolation list");
  return kinds;
}

}  // namespace dcls
