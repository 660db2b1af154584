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


// Exercises the shared library through the public C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "dcls.h"
#include "doctest.h"

namespace {

std::string temp_dir(const char* tag) {
  const auto p = std::filesystem::temp_directory_path() /
                 (std::string("dcls_capi_") + tag + "_" +
                  std::to_string(std::hash<std::string>{}(__FILE__) % 100000));
  std::filesystem::remove_all(p);
  return p.string();
}

struct Config {
  dcls_config* ptr = nullptr;
  Config() { REQUIRE(dcls_config_create(&ptr) == DCLS_OK); }
  ~Config() { dcls_config_destroy(ptr); }
};

}  // namespace

TEST_CASE("library metadata") {
  CHECK(std::strlen(dcls_version()) > 0);
  CHECK(std::string(dcls_status_name(DCLS_ERR_CONFIG)).size() > 0);
  CHECK(dcls_set_num_threads(1) == DCLS_OK);
  CHECK(dcls_set_num_threads(0) == DCLS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("interpolation values") {
  double v = 0.0;
  REQUIRE(dcls_interp_eval(DCLS_INTERP_TRIANGLE, 0.5, 0.0, &v) == DCLS_OK);
  CHECK(v == 0.5);
  REQUIRE(dcls_interp_eval(DCLS_INTERP_GAUSS, 0.0, 0.23, &v) == DCLS_OK);
  CHECK(v == 1.0);
  CHECK(dcls_interp_eval(DCLS_INTERP_GAUSS, 0.0, 0.0, nullptr) == DCLS_ERR_INVALID_ARGUMENT);
  CHECK(dcls_interp_eval(static_cast<dcls_interp>(7), 0.0, 0.0, &v) ==
        DCLS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("configuration handle") {
  Config c;
  CHECK(dcls_config_set(c.ptr, "optim.epochs=3") == DCLS_OK);
  size_t needed = 0;
  REQUIRE(dcls_config_get(c.ptr, "optim.epochs", nullptr, 0, &needed) == DCLS_OK);
  CHECK(needed == 2);
  std::vector<char> buf(needed);
  REQUIRE(dcls_config_get(c.ptr, "optim.epochs", buf.data(), buf.size(), &needed) == DCLS_OK);
  CHECK(std::string(buf.data()) == "3");
  char small[1];
  CHECK(dcls_config_get(c.ptr, "optim.epochs", small, 1, &needed) ==
        DCLS_ERR_INVALID_ARGUMENT);

  CHECK(dcls_config_set(c.ptr, "model.bogus=1") == DCLS_ERR_CONFIG);
  CHECK(std::string(dcls_last_error()).find("bogus") != std::string::npos);
  CHECK(dcls_config_load_file(c.ptr, "/nonexistent/x.cfg") == DCLS_ERR_IO);

  REQUIRE(dcls_config_serialize(c.ptr, nullptr, 0, &needed) == DCLS_OK);
  std::vector<char> text(needed);
  REQUIRE(dcls_config_serialize(c.ptr, text.data(), text.size(), &needed) == DCLS_OK);
  CHECK(std::string(text.data()).find("epochs = 3") != std::string::npos);
}

TEST_CASE("kernel construction and backward") {
  const int sizes[2] = {5, 5};
  const double w[1] = {2.0};
  const double p[2] = {1.0, -1.0};
  const double s[2] = {0.0, 0.0};
  dcls_kernel* k = nullptr;
  REQUIRE(dcls_kernel_construct(DCLS_INTERP_BILINEAR, 2, sizes, 1, 1, 1, w, p, s, &k) ==
          DCLS_OK);
  size_t n = 0;
  const double* data = nullptr;
  REQUIRE(dcls_kernel_size(k, &n) == DCLS_OK);
  REQUIRE(dcls_kernel_data(k, &data) == DCLS_OK);
  REQUIRE(n == 25);
  for (size_t i = 0; i < n; ++i)
    CHECK(data[i] == doctest::Approx(i == 16 ? 2.0 / (1.0 + 1e-7) : 0.0));

  std::vector<double> gk(25, 0.0);
  gk[16] = 1.0;
  double gw = 0.0, gp[2] = {0.0, 0.0}, gs[2] = {0.0, 0.0};
  REQUIRE(dcls_kernel_backward(k, gk.data(), &gw, gp, gs) == DCLS_OK);
  CHECK(gw == doctest::Approx(1.0 / (1.0 + 1e-7)));
  dcls_kernel_destroy(k);

  CHECK(dcls_kernel_construct(DCLS_INTERP_GAUSS, 4, sizes, 1, 1, 1, w, p, s, &k) != DCLS_OK);
  const double bad[2] = {NAN, 0.0};
  CHECK(dcls_kernel_construct(DCLS_INTERP_GAUSS, 2, sizes, 1, 1, 1, w, bad, s, &k) ==
        DCLS_ERR_NON_FINITE);
  dcls_kernel_destroy(nullptr);
}

TEST_CASE("commands") {
  Config c;
  for (const char* a : {"data.n=40", "data.size=16", "model.layers=pw:2,dcls,gap,fc",
                        "model.dilated_size=5", "model.kernel_count=2", "optim.epochs=1",
                        "gradcheck.kernel_cases=3", "gradcheck.layer_cases=1"})
    REQUIRE(dcls_config_set(c.ptr, a) == DCLS_OK);
  const std::string out = temp_dir("train");
  int code = -1;
  REQUIRE(dcls_cmd_train(c.ptr, out.c_str(), 0, &code) == DCLS_OK);
  CHECK(code == 0);
  CHECK(std::filesystem::exists(out + "/loss.csv"));
  const std::string ckpt = out + "/checkpoint.bin";
  REQUIRE(dcls_cmd_eval(c.ptr, ckpt.c_str(), (out + "/eval").c_str(), 0, &code) == DCLS_OK);
  CHECK(code == 0);
  REQUIRE(dcls_cmd_inspect_kernel(ckpt.c_str(), 0, 1, (out + "/inspect").c_str(), 0, &code) ==
          DCLS_OK);
  CHECK(std::filesystem::exists(out + "/inspect/kernels/layer0_ch1.pgm"));
  CHECK(dcls_cmd_inspect_kernel(ckpt.c_str(), 5, 0, (out + "/inspect").c_str(), 0, &code) ==
        DCLS_ERR_INVALID_ARGUMENT);
  REQUIRE(dcls_cmd_gradcheck(c.ptr, (out + "/gc").c_str(), 0, &code) == DCLS_OK);
  CHECK(code == 0);
  CHECK(dcls_cmd_eval(c.ptr, "/nonexistent.bin", out.c_str(), 0, &code) == DCLS_ERR_IO);
  std::filesystem::remove_all(out);
}
