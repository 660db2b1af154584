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

#include "golden.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "error.hpp"

namespace dcls {
namespace {

std::string join(std::span<const double> values) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

std::vector<double> split_numbers(std::string_view text, std::string_view key) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto cell = text.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    DCLS_CHECK(ec == std::errc() && ptr == cell.data() + cell.size() && !cell.empty(),
               ErrorCode::kFormat,
               "golden field '" + std::string(key) + "': bad number '" +
                   std::string(cell) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_int(const std::string& v, std::string_view key) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  DCLS_CHECK(ec == std::errc() && ptr == v.data() + v.size(), ErrorCode::kFormat,
             "golden field '" + std::string(key) + "': bad integer '" + v + "'");
  return out;
}

}  // namespace

std::string format_golden(const GoldenRecord& r) {
  std::ostringstream out;
  out << "name=" << r.name << " kind=" << interp_name(r.interp.kind)
      << " sizes=";
  for (int a = 0; a < r.geom.rank(); ++a)
    out << (a ? "x" : "") << r.geom.dilated_size[a];
  out << " m=" << r.geom.kernel_count << " c_out=" << r.params.c_out()
      << " c_in=" << r.params.c_in_per_group()
      << " w=" << join(r.params.weights.values());
  for (int a = 0; a < r.geom.rank(); ++a)
    out << " p" << a << '=' << join(r.params.positions[a].values());
  for (int a = 0; a < r.geom.rank(); ++a)
    out << " s" << a << '=' << join(r.params.sigmas[a].values());
  out << " K=" << join(r.expected.values());
  return out.str();
}

GoldenRecord parse_golden(std::string_view line) {
  std::map<std::string, std::string> fields;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    DCLS_CHECK(eq != std::string::npos && eq > 0, ErrorCode::kFormat,
               "golden token '" + tok + "' is not key=value");
    fields[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = fields.find(key);
    DCLS_CHECK(it != fields.end(), ErrorCode::kFormat,
               "golden record lacks field '" + key + "'");
    return it->second;
  };

  GoldenRecord r;
  r.name = need("name");
  try {
    r.interp = Interpolation::of(parse_interp_kind(need("kind")));
  } catch (const Error& e) {
    fail(ErrorCode::kFormat, std::string("golden record: ") + e.what());
  }
  {
    std::stringstream ss(need("sizes"));
    std::string cell;
    while (std::getline(ss, cell, 'x'))
      r.geom.dilated_size.push_back(parse_int(cell, "sizes"));
  }
  r.geom.kernel_count = parse_int(need("m"), "m");
  const auto c_out = static_cast<std::size_t>(parse_int(need("c_out"), "c_out"));
  const auto c_in = static_cast<std::size_t>(parse_int(need("c_in"), "c_in"));
  try {
    r.geom.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kFormat, std::string("golden record: ") + e.what());
  }

  const Shape pshape{c_out, c_in, static_cast<std::size_t>(r.geom.kernel_count)};
  auto tensor = [&](const std::string& key, const Shape& shape) {
    std::vector<double> v = split_numbers(need(key), key);
    DCLS_CHECK(v.size() == shape_numel(shape), ErrorCode::kFormat,
               "golden field '" + key + "' has " + std::to_string(v.size()) +
                   " values, expected " + std::to_string(shape_numel(shape)));
    return Tensor(shape, std::move(v));
  };
  r.params.weights = tensor("w", pshape);
  for (int a = 0; a < r.geom.rank(); ++a)
    r.params.positions.push_back(tensor("p" + std::to_string(a), pshape));
  for (int a = 0; a < r.geom.rank(); ++a)
    r.params.sigmas.push_back(tensor("s" + std::to_string(a), pshape));
  Shape kshape{c_out, c_in};
  for (int s : r.geom.dilated_size) kshape.push_back(static_cast<std::size_t>(s));
  r.expected = tensor("K", kshape);
  return r;
}

std::vector<GoldenRecord> read_golden_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  DCLS_CHECK(in.good(), ErrorCode::kIo, "cannot open golden file " + path.string());
  std::vector<GoldenRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(parse_golden(line));
  }
  return out;
}

void write_golden_file(const std::filesystem::path& path,
                       const std::vector<GoldenRecord>& records,
                       const std::string& header_comment) {
  std::ofstream out(path);
  DCLS_CHECK(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  if (!header_comment.empty()) {
    std::istringstream lines(header_comment);
    for (std::string line; std::getline(lines, line);)
      out << (line.empty() ? "#" : "# " + line) << '\n';
  }
  for (const GoldenRecord& r : records) out << format_golden(r) << '\n';
}

}  // namespace dcls
