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


// Writes the golden kernel records consumed by the test suite:
//   dcls_make_golden OUT_FILE
// Parameters are drawn from a fixed seed so regeneration is deterministic.

#include <cstdio>
#include <exception>
#include <random>
#include <string>

#include "golden.hpp"
#include "kernelgen.hpp"

namespace {

constexpr const char* kLicense = R"(Copyright 2026 The DCLS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.)";

dcls::GoldenRecord make_record(const char* name, dcls::Interpolation interp,
                               dcls::DclsGeometry geom, std::size_t c_out,
                               std::size_t c_in, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::uniform_real_distribution<double> s(-0.6, 0.6);
  dcls::GoldenRecord r;
  r.name = name;
  r.interp = interp;
  r.geom = geom;
  r.params = dcls::DclsParams::zeros(c_out, c_in, geom);
  for (double& v : r.params.weights.values()) v = w(rng);
  for (int a = 0; a < geom.rank(); ++a) {
    const int size = geom.dilated_size[a];
    std::uniform_real_distribution<double> p(-(size / 2), size - 1 - size / 2 - 0.01);
    for (double& v : r.params.positions[a].values()) v = p(rng);
    if (interp.learns_sigma())
      for (double& v : r.params.sigmas[a].values()) v = s(rng);
  }
  r.expected = dcls::construct_kernel(r.params, geom, interp, false).kernel;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s OUT_FILE\n", argv[0]);
    return 2;
  }
  try {
    std::mt19937_64 rng(20260101);
    const std::vector<dcls::GoldenRecord> records{
        make_record("bilinear_2d", dcls::Interpolation::bilinear(),
                    {{5, 4}, 3}, 2, 1, rng),
        make_record("triangle_1d", dcls::Interpolation::triangle(),
                    {{7}, 2}, 1, 2, rng),
        make_record("gauss_3d", dcls::Interpolation::gauss(),
                    {{3, 5, 3}, 2}, 1, 1, rng),
    };
    dcls::write_golden_file(argv[1], records,
                            std::string(kLicense) + "\n\n" +
                            "golden kernel records; regenerate with dcls_make_golden");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dcls_make_golden: %s\n", e.what());
    return 1;
  }
  return 0;
}
