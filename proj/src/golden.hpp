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

// Golden kernel vectors: one record per line, space-separated key=value
// fields, numbers in %.17g, lists comma-separated.
//
//   name=<id> kind=<bilinear|triangle|gauss> sizes=<s0>x<s1>[x<s2>] m=<m>
//   c_out=<n> c_in=<n> w=<list> p0=<list> ... s0=<list> ... K=<list>
//
// p<a>/s<a> appear once per spatial axis; lists are row-major over
// [c_out, c_in, m] (parameters) or the kernel shape (K). Blank lines and lines
// starting with '#' are ignored.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kernelgen.hpp"

namespace dcls {

struct GoldenRecord {
  std::string name;
  Interpolation interp;
  DclsGeometry geom;
  DclsParams params;
  Tensor expected;  // constructed kernel
};

std::string format_golden(const GoldenRecord& record);
GoldenRecord parse_golden(std::string_view line);

std::vector<GoldenRecord> read_golden_file(const std::filesystem::path& path);
void write_golden_file(const std::filesystem::path& path,
                       const std::vector<GoldenRecord>& records,
                       const std::string& header_comment = {});

}  // namespace dcls
