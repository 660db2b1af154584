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

#include "conv.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>

#include "error.hpp"
#include "parallel.hpp"

namespace dcls {
namespace {

using Index = std::ptrdiff_t;

// All ranks are lifted to three spatial axes by prepending extent-1 axes, so
// the innermost loop always runs along the last (contiguous) axis.
struct Plan {
  Index batch = 0;
  Index c_in = 0;
  Index c_out = 0;
  Index groups = 1;
  Index c_in_g = 0;
  Index c_out_g = 0;
  std::array<Index, 3> in{1, 1, 1};
  std::array<Index, 3> k{1, 1, 1};
  std::array<Index, 3> out{1, 1, 1};
  std::array<Index, 3> stride{1, 1, 1};
  std::array<Index, 3> pad{0, 0, 0};

  Index in_plane() const { return in[0] * in[1] * in[2]; }
  Index out_plane() const { return out[0] * out[1] * out[2]; }
  Index taps() const { return k[0] * k[1] * k[2]; }
};

Plan make_plan(const Shape& input, const Shape& kernel, const ConvSpec& spec) {
  DCLS_CHECK(input.size() >= 3 && input.size() <= 5, ErrorCode::kShapeMismatch,
             "conv input must be [N, C, spatial...] with 1-3 spatial axes, got " +
                 shape_str(input));
  DCLS_CHECK(kernel.size() == input.size(), ErrorCode::kShapeMismatch,
             "kernel " + shape_str(kernel) + " rank does not match input " +
                 shape_str(input));
  const std::size_t rank = input.size() - 2;
  DCLS_CHECK(spec.stride.size() == rank && spec.padding.size() == rank,
             ErrorCode::kInvalidArgument,
             "stride/padding must have one entry per spatial axis");
  DCLS_CHECK(spec.groups >= 1, ErrorCode::kInvalidArgument,
             "groups must be >= 1");

  Plan p;
  p.batch = static_cast<Index>(input[0]);
  p.c_in = static_cast<Index>(input[1]);
  p.c_out = static_cast<Index>(kernel[0]);
  p.groups = spec.groups;
  DCLS_CHECK(p.c_in % p.groups == 0 && p.c_out % p.groups == 0,
             ErrorCode::kInvalidArgument,
             "groups=" + std::to_string(p.groups) +
                 " must divide both channel counts (" +
                 std::to_string(p.c_in) + ", " + std::to_string(p.c_out) + ")");
  p.c_in_g = p.c_in / p.groups;
  p.c_out_g = p.c_out / p.groups;
  DCLS_CHECK(static_cast<Index>(kernel[1]) == p.c_in_g,
             ErrorCode::kShapeMismatch,
             "kernel expects " + std::to_string(kernel[1]) +
                 " input channels per group, input provides " +
                 std::to_string(p.c_in_g));

  const std::size_t lift = 3 - rank;
  for (std::size_t a = 0; a < rank; ++a) {
    DCLS_CHECK(spec.stride[a] >= 1 && spec.padding[a] >= 0,
               ErrorCode::kInvalidArgument,
               "stride must be >= 1 and padding >= 0");
    const Index in = static_cast<Index>(input[a + 2]);
    const Index k = static_cast<Index>(kernel[a + 2]);
    const Index span = in + 2 * spec.padding[a] - k;
    DCLS_CHECK(span >= 0 && in >= 1 && k >= 1, ErrorCode::kShapeMismatch,
               "kernel extent " + std::to_string(k) + " exceeds padded input " +
                   std::to_string(in + 2 * spec.padding[a]) + " on axis " +
                   std::to_string(a));
    p.in[lift + a] = in;
    p.k[lift + a] = k;
    p.stride[lift + a] = spec.stride[a];
    p.pad[lift + a] = spec.padding[a];
    p.out[lift + a] = span / spec.stride[a] + 1;
  }
  return p;
}

// Output indices o in [lo, hi) whose input index o*stride + tap - pad is valid.
std::pair<Index, Index> valid_range(Index out_len, Index in_len, Index stride,
                                    Index pad, Index tap) {
  const Index off = tap - pad;
  Index lo = off >= 0 ? 0 : (-off + stride - 1) / stride;
  Index hi = in_len - 1 - off < 0 ? 0 : (in_len - 1 - off) / stride + 1;
  lo = std::min(lo, out_len);
  hi = std::clamp(hi, lo, out_len);
  return {lo, hi};
}

}  // namespace

ConvSpec ConvSpec::same(const std::vector<int>& kernel_size, int groups) {
  ConvSpec spec;
  spec.stride.assign(kernel_size.size(), 1);
  for (int k : kernel_size) spec.padding.push_back(k / 2);
  spec.groups = groups;
  return spec;
}

Shape conv_output_shape(const Shape& input, const Shape& kernel,
                        const ConvSpec& spec) {
  const Plan p = make_plan(input, kernel, spec);
  Shape out{input[0], kernel[0]};
  for (std::size_t a = 3 - (input.size() - 2); a < 3; ++a)
    out.push_back(static_cast<std::size_t>(p.out[a]));
  return out;
}

Tensor conv_forward(const Tensor& input, const Tensor& kernel,
                    const ConvSpec& spec) {
  const Plan p = make_plan(input.shape(), kernel.shape(), spec);
  Tensor output(conv_output_shape(input.shape(), kernel.shape(), spec));

  const Index in_plane = p.in_plane();
  const Index out_plane = p.out_plane();
  const Index taps = p.taps();

  parallel_for(static_cast<std::size_t>(p.batch * p.c_out), [&](std::size_t job) {
    const Index n = static_cast<Index>(job) / p.c_out;
    const Index oc = static_cast<Index>(job) % p.c_out;
    const Index g = oc / p.c_out_g;
    double* out = output.data() + job * out_plane;

    for (Index icg = 0; icg < p.c_in_g; ++icg) {
      const Index ic = g * p.c_in_g + icg;
      const double* in = input.data() + (n * p.c_in + ic) * in_plane;
      const double* w = kernel.data() + (oc * p.c_in_g + icg) * taps;

      for (Index kd = 0; kd < p.k[0]; ++kd) {
        const auto [d_lo, d_hi] =
            valid_range(p.out[0], p.in[0], p.stride[0], p.pad[0], kd);
        for (Index kh = 0; kh < p.k[1]; ++kh) {
          const auto [h_lo, h_hi] =
              valid_range(p.out[1], p.in[1], p.stride[1], p.pad[1], kh);
          for (Index kw = 0; kw < p.k[2]; ++kw) {
            const double wv = w[(kd * p.k[1] + kh) * p.k[2] + kw];
            if (wv == 0.0) continue;
            const auto [w_lo, w_hi] =
                valid_range(p.out[2], p.in[2], p.stride[2], p.pad[2], kw);
            const Index off = kw - p.pad[2];
            const Index sw = p.stride[2];
            for (Index od = d_lo; od < d_hi; ++od) {
              const Index id = od * p.stride[0] + kd - p.pad[0];
              for (Index oh = h_lo; oh < h_hi; ++oh) {
                const Index ih = oh * p.stride[1] + kh - p.pad[1];
                const double* irow = in + (id * p.in[1] + ih) * p.in[2];
                double* orow = out + (od * p.out[1] + oh) * p.out[2];
                if (sw == 1) {
                  for (Index ow = w_lo; ow < w_hi; ++ow)
                    orow[ow] += wv * irow[ow + off];
                } else {
                  for (Index ow = w_lo; ow < w_hi; ++ow)
                    orow[ow] += wv * irow[ow * sw + off];
                }
              }
            }
          }
        }
      }
    }
  });
  return output;
}

ConvGrads conv_backward(const Tensor& input, const Tensor& kernel,
                        const ConvSpec& spec, const Tensor& grad_out) {
  const Plan p = make_plan(input.shape(), kernel.shape(), spec);
  const Shape out_shape = conv_output_shape(input.shape(), kernel.shape(), spec);
  DCLS_CHECK(grad_out.shape() == out_shape, ErrorCode::kShapeMismatch,
             "grad_out " + shape_str(grad_out.shape()) +
                 " does not match conv output " + shape_str(out_shape));

  ConvGrads grads{Tensor(input.shape()), Tensor(kernel.shape())};
  const Index in_plane = p.in_plane();
  const Index out_plane = p.out_plane();
  const Index taps = p.taps();

  // Input gradient: each (n, ic) plane is owned by one job.
  parallel_for(static_cast<std::size_t>(p.batch * p.c_in), [&](std::size_t job) {
    const Index n = static_cast<Index>(job) / p.c_in;
    const Index ic = static_cast<Index>(job) % p.c_in;
    const Index g = ic / p.c_in_g;
    const Index icg = ic % p.c_in_g;
    double* gi = grads.input.data() + job * in_plane;

    for (Index ocg = 0; ocg < p.c_out_g; ++ocg) {
      const Index oc = g * p.c_out_g + ocg;
      const double* go = grad_out.data() + (n * p.c_out + oc) * out_plane;
      const double* w = kernel.data() + (oc * p.c_in_g + icg) * taps;
      for (Index kd = 0; kd < p.k[0]; ++kd) {
        const auto [d_lo, d_hi] =
            valid_range(p.out[0], p.in[0], p.stride[0], p.pad[0], kd);
        for (Index kh = 0; kh < p.k[1]; ++kh) {
          const auto [h_lo, h_hi] =
              valid_range(p.out[1], p.in[1], p.stride[1], p.pad[1], kh);
          for (Index kw = 0; kw < p.k[2]; ++kw) {
            const double wv = w[(kd * p.k[1] + kh) * p.k[2] + kw];
            if (wv == 0.0) continue;
            const auto [w_lo, w_hi] =
                valid_range(p.out[2], p.in[2], p.stride[2], p.pad[2], kw);
            const Index off = kw - p.pad[2];
            const Index sw = p.stride[2];
            for (Index od = d_lo; od < d_hi; ++od) {
              const Index id = od * p.stride[0] + kd - p.pad[0];
              for (Index oh = h_lo; oh < h_hi; ++oh) {
                const Index ih = oh * p.stride[1] + kh - p.pad[1];
                double* irow = gi + (id * p.in[1] + ih) * p.in[2];
                const double* orow = go + (od * p.out[1] + oh) * p.out[2];
                if (sw == 1) {
                  for (Index ow = w_lo; ow < w_hi; ++ow)
                    irow[ow + off] += wv * orow[ow];
                } else {
                  for (Index ow = w_lo; ow < w_hi; ++ow)
                    irow[ow * sw + off] += wv * orow[ow];
                }
              }
            }
          }
        }
      }
    }
  });

  // Kernel gradient: each (oc, icg) slice is owned by one job; the batch is
  // reduced in ascending order.
  parallel_for(static_cast<std::size_t>(p.c_out * p.c_in_g), [&](std::size_t job) {
    const Index oc = static_cast<Index>(job) / p.c_in_g;
    const Index icg = static_cast<Index>(job) % p.c_in_g;
    const Index ic = (oc / p.c_out_g) * p.c_in_g + icg;
    double* gw = grads.kernel.data() + job * taps;

    for (Index kd = 0; kd < p.k[0]; ++kd) {
      const auto [d_lo, d_hi] =
          valid_range(p.out[0], p.in[0], p.stride[0], p.pad[0], kd);
      for (Index kh = 0; kh < p.k[1]; ++kh) {
        const auto [h_lo, h_hi] =
            valid_range(p.out[1], p.in[1], p.stride[1], p.pad[1], kh);
        for (Index kw = 0; kw < p.k[2]; ++kw) {
          const auto [w_lo, w_hi] =
              valid_range(p.out[2], p.in[2], p.stride[2], p.pad[2], kw);
          const Index off = kw - p.pad[2];
          const Index sw = p.stride[2];
          double acc = 0.0;
          for (Index n = 0; n < p.batch; ++n) {
            const double* in = input.data() + (n * p.c_in + ic) * in_plane;
            const double* go = grad_out.data() + (n * p.c_out + oc) * out_plane;
            for (Index od = d_lo; od < d_hi; ++od) {
              const Index id = od * p.stride[0] + kd - p.pad[0];
              for (Index oh = h_lo; oh < h_hi; ++oh) {
                const Index ih = oh * p.stride[1] + kh - p.pad[1];
                const double* irow = in + (id * p.in[1] + ih) * p.in[2];
                const double* orow = go + (od * p.out[1] + oh) * p.out[2];
                if (sw == 1) {
                  for (Index ow = w_lo; ow < w_hi; ++ow)
                    acc += orow[ow] * irow[ow + off];
                } else {
                  for (Index ow = w_lo; ow < w_hi; ++ow)
                    acc += orow[ow] * irow[ow * sw + off];
                }
              }
            }
          }
          gw[(kd * p.k[1] + kh) * p.k[2] + kw] = acc;
        }
      }
    }
  });
  return grads;
}

}  // namespace dcls
