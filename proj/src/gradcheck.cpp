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

#include "gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "dcls_layer.hpp"
#include "error.hpp"

namespace dcls {
namespace {

constexpr double kLayerPositionRadius = 1.0;

bool near_kink(const Interpolation& interp, double centered, double sigma_raw,
               int s) {
  if (interp.kind == InterpKind::kGauss) return false;
  const double sigma_eff =
      interp.sigma0 + (interp.learns_sigma() ? std::abs(sigma_raw) : 0.0);
  for (int i = 0; i < s; ++i) {
    const double ax = std::abs(centered - i);
    if (ax < kKinkExclusion || std::abs(ax - sigma_eff) < kKinkExclusion)
      return true;
  }
  return false;
}

// Fills every element with random parameters, re-drawing elements whose
// triangle evaluation points sit within kKinkExclusion of a kink. Returns the
// number of re-draws. A positive `radius` keeps positions within that distance
// of the grid centre.
std::size_t sample_params(DclsParams& p, const DclsGeometry& geom,
                          const Interpolation& interp, std::mt19937_64& rng,
                          double radius = 0.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto signed_mag = [&](double lo, double hi) {
    const double mag = lo + (hi - lo) * unit(rng);
    return unit(rng) < 0.5 ? -mag : mag;
  };
  std::size_t skipped = 0;
  for (std::size_t e = 0; e < p.weights.size(); ++e) {
    p.weights[e] = signed_mag(0.5, 1.5);
    while (true) {
      bool kink = false;
      for (int a = 0; a < geom.rank(); ++a) {
        const int s = geom.dilated_size[a];
        double lo = -static_cast<double>(s / 2);
        double hi = static_cast<double>(s - 1 - s / 2);
        if (radius > 0.0) {
          lo = std::max(lo, -radius);
          hi = std::min(hi, radius);
        }
        p.positions[a][e] = lo + (hi - lo) * unit(rng);
        p.sigmas[a][e] = interp.learns_sigma() ? signed_mag(0.05, 1.2) : 0.0;
        kink = kink || near_kink(interp, p.positions[a][e] + (s / 2),
                                 p.sigmas[a][e], s);
      }
      if (!kink) break;
      ++skipped;
    }
  }
  return skipped;
}

// Parameters flattened as [w, p_0..p_{r-1}, sigma_0..sigma_{r-1}].
std::vector<double> flatten(const DclsParams& p) {
  std::vector<double> out(p.weights.vector());
  for (const Tensor& t : p.positions) out.insert(out.end(), t.vector().begin(), t.vector().end());
  for (const Tensor& t : p.sigmas) out.insert(out.end(), t.vector().begin(), t.vector().end());
  return out;
}

DclsParams unflatten(std::span<const double> x, const DclsParams& like) {
  DclsParams p = like;
  std::size_t at = 0;
  auto take = [&](Tensor& t) {
    std::copy_n(x.begin() + at, t.size(), t.data());
    at += t.size();
  };
  take(p.weights);
  for (Tensor& t : p.positions) take(t);
  for (Tensor& t : p.sigmas) take(t);
  return p;
}

Tensor random_normal(Shape shape, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = normal(rng);
  return t;
}

class Accumulator {
 public:
  void add(const std::string& level, InterpKind kind, const std::string& param,
           std::span<const double> analytic, std::span<const double> numeric,
           double tolerance, std::size_t skipped, bool fixed) {
    GradCheckEntry& e = entries_[{level, static_cast<int>(kind), order(param)}];
    e.level = level;
    e.kind = kind;
    e.param = param;
    e.tolerance = tolerance;
    e.fixed = fixed;
    e.skipped_kinks += skipped;
    for (std::size_t i = 0; i < analytic.size(); ++i)
      e.max_rel_error =
          std::max(e.max_rel_error, relative_error(analytic[i], numeric[i]));
    e.points += analytic.size();
  }

  GradCheckReport report() const {
    GradCheckReport r;
    for (const auto& [key, e] : entries_) r.entries.push_back(e);
    return r;
  }

 private:
  static int order(const std::string& p) {
    if (p == "weights") return 0;
    if (p == "positions") return 1;
    if (p == "sigmas") return 2;
    return 3;
  }
  std::map<std::tuple<std::string, int, int>, GradCheckEntry> entries_;
};

void compare_param_grads(Accumulator& acc, const std::string& level,
                         const Interpolation& interp, const DclsParams& analytic,
                         std::span<const double> numeric, double tolerance,
                         std::size_t skipped, bool flip_sigma) {
  std::size_t at = 0;
  auto block = [&](std::size_t n) {
    auto s = numeric.subspan(at, n);
    at += n;
    return s;
  };
  const std::size_t n = analytic.weights.size();
  acc.add(level, interp.kind, "weights", analytic.weights.values(), block(n),
          tolerance, skipped, false);

  std::vector<double> pos, pos_num, sig, sig_num;
  for (const Tensor& t : analytic.positions) {
    pos.insert(pos.end(), t.vector().begin(), t.vector().end());
    auto b = block(n);
    pos_num.insert(pos_num.end(), b.begin(), b.end());
  }
  for (const Tensor& t : analytic.sigmas) {
    for (double v : t.values()) sig.push_back(flip_sigma ? -v : v);
    auto b = block(n);
    sig_num.insert(sig_num.end(), b.begin(), b.end());
  }
  acc.add(level, interp.kind, "positions", pos, pos_num, tolerance, 0, false);
  acc.add(level, interp.kind, "sigmas", sig, sig_num, tolerance, 0,
          !interp.learns_sigma());
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), 1e-12});
  return std::abs(analytic - numeric) / denom;
}

std::vector<double> central_difference(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h) {
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = point[i];
    point[i] = orig + h;
    const double up = f(point);
    point[i] = orig - h;
    const double down = f(point);
    point[i] = orig;
    DCLS_CHECK(std::isfinite(up) && std::isfinite(down), ErrorCode::kNonFinite,
               "finite-difference evaluation produced a non-finite value");
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

bool GradCheckReport::passed() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const GradCheckEntry& e) { return e.passed(); });
}

std::string GradCheckReport::to_csv(const std::string& comment) const {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "level,kind,param,max_rel_error,points,skipped_kinks,tolerance,status\n";
  char buf[64];
  for (const GradCheckEntry& e : entries) {
    out << e.level << ',' << interp_name(e.kind) << ',' << e.param << ',';
    if (e.fixed) {
      out << "fixed (no gradient)";
    } else {
      std::snprintf(buf, sizeof buf, "%.3e", e.max_rel_error);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.0e", e.tolerance);
    out << ',' << e.points << ',' << e.skipped_kinks << ',' << buf << ','
        << (e.fixed ? "fixed" : (e.passed() ? "PASS" : "FAIL")) << '\n';
  }
  return out.str();
}

GradCheckReport kernel_gradcheck(const GradCheckOptions& options) {
  static constexpr int kRanks[] = {1, 2, 3};
  static constexpr int kCounts[] = {1, 3, 7};
  static constexpr int kSizes[] = {3, 5, 9};

  Accumulator acc;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<int> channels(1, 2);

  for (InterpKind kind : options.kinds) {
    const Interpolation interp = Interpolation::of(kind);
    for (int c = 0; c < options.kernel_cases; ++c) {
      DclsGeometry geom;
      const int rank = kRanks[c % 3];
      geom.kernel_count = kCounts[(c / 3) % 3];
      for (int a = 0; a < rank; ++a) {
        // Keep 3-D grids small enough for a quick finite-difference sweep.
        geom.dilated_size.push_back(rank == 3 ? kSizes[pick(rng) % 2]
                                              : kSizes[pick(rng)]);
      }
      const auto c_out = static_cast<std::size_t>(channels(rng));
      const auto c_in = static_cast<std::size_t>(channels(rng));
      DclsParams params = DclsParams::zeros(c_out, c_in, geom);
      const std::size_t skipped = sample_params(params, geom, interp, rng);

      ConstructedKernel built = construct_kernel(params, geom, interp);
      const Tensor weights = random_normal(built.kernel.shape(), rng);
      const DclsParams analytic = construct_kernel_backward(built, weights);

      auto loss = [&](std::span<const double> x) {
        const DclsParams p = unflatten(x, params);
        return dot(construct_kernel(p, geom, interp, false).kernel, weights);
      };
      const std::vector<double> x0 = flatten(params);
      const std::vector<double> numeric = central_difference(loss, x0, options.step);
      compare_param_grads(acc, "kernel", interp, analytic, numeric,
                          options.kernel_tolerance, skipped,
                          options.flip_sigma_sign);
    }
  }
  return acc.report();
}

GradCheckReport layer_gradcheck(const GradCheckOptions& options) {
  static constexpr int kGroups[] = {4, 2, 1};
  static constexpr int kSizes[] = {3, 5, 7};
  static constexpr int kCounts[] = {1, 3};

  Accumulator acc;
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);

  for (InterpKind kind : options.kinds) {
    const Interpolation interp = Interpolation::of(kind);
    for (int c = 0; c < options.layer_cases; ++c) {
      const int groups = kGroups[c % 3];
      const int s = kSizes[(c / 3) % 3];
      DclsGeometry geom{{s, s}, kCounts[c % 2]};
      const std::size_t c_io = 4;
      DclsParams params =
          DclsParams::zeros(c_io, c_io / static_cast<std::size_t>(groups), geom);
      // Elements near the centre tap keep every input pixel's gradient well
      // above finite-difference roundoff; off-centre positions are covered by
      // the kernel-level check.
      const std::size_t skipped =
          sample_params(params, geom, interp, rng, kLayerPositionRadius);
      const ConvSpec spec = ConvSpec::same(geom.dilated_size, groups);

      const Tensor input = random_normal({1, c_io, 9, 9}, rng);
      DclsLayerCache cache;
      const Tensor out =
          dcls_layer_forward(input, params, geom, interp, spec, &cache);
      const Tensor weights = random_normal(out.shape(), rng);
      const DclsLayerGrads analytic = dcls_layer_backward(cache, spec, weights);

      const std::vector<double> p0 = flatten(params);
      auto param_loss = [&](std::span<const double> x) {
        return dot(dcls_layer_forward(input, unflatten(x, params), geom, interp,
                                      spec, nullptr),
                   weights);
      };
      compare_param_grads(acc, "layer", interp, analytic.params,
                          central_difference(param_loss, p0, options.step),
                          options.layer_tolerance, skipped,
                          options.flip_sigma_sign);

      auto input_loss = [&](std::span<const double> x) {
        const Tensor in(input.shape(), std::vector<double>(x.begin(), x.end()));
        return dot(dcls_layer_forward(in, params, geom, interp, spec, nullptr),
                   weights);
      };
      acc.add("layer", kind, "input", analytic.input.values(),
              central_difference(input_loss, input.values(), options.step),
              options.layer_tolerance, 0, false);
    }
  }
  return acc.report();
}

}  // namespace dcls
