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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "checkpoint.hpp"
#include "error.hpp"
#include "gradcheck.hpp"
#include "model.hpp"

namespace dcls {
namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  DCLS_CHECK(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  DCLS_CHECK(out.good(), ErrorCode::kIo, "short write to " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  DCLS_CHECK(!ec, ErrorCode::kIo,
             "cannot create directory " + dir.string() + ": " + ec.message());
}

std::string hash_comment(const RunConfig& config) {
  return "# config_hash=" + config.hash() + "\n";
}

Shape input_shape(const RunConfig& config) {
  if (config.data.source == "synth") {
    const auto s = static_cast<std::size_t>(config.data.size);
    return {1, s, s};
  }
  return {1, static_cast<std::size_t>(config.data.height),
          static_cast<std::size_t>(config.data.width)};
}

Tensor batch_images(const Dataset& data, std::span<const std::size_t> idx) {
  const std::size_t stride = data.channels() * data.height() * data.width();
  Tensor out({idx.size(), data.channels(), data.height(), data.width()});
  for (std::size_t b = 0; b < idx.size(); ++b)
    std::copy_n(data.images.data() + idx[b] * stride, stride,
                out.data() + b * stride);
  return out;
}

struct EvalStats {
  double loss = 0.0;
  double accuracy = 0.0;
};

EvalStats evaluate(Network& net, const Dataset& data, std::size_t batch) {
  if (data.size() == 0) return {std::nan(""), std::nan("")};
  double loss = 0.0;
  std::size_t correct = 0;
  std::vector<std::size_t> idx;
  std::vector<int> labels;
  for (std::size_t start = 0; start < data.size(); start += batch) {
    const std::size_t end = std::min(start + batch, data.size());
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    labels.assign(data.labels.begin() + static_cast<std::ptrdiff_t>(start),
                  data.labels.begin() + static_cast<std::ptrdiff_t>(end));
    const Tensor logits = net.forward(batch_images(data, idx));
    loss += softmax_cross_entropy(logits, labels, nullptr) *
            static_cast<double>(end - start);
    correct += count_correct(logits, labels);
  }
  const auto n = static_cast<double>(data.size());
  return {loss / n, static_cast<double>(correct) / n};
}

// Rows = product of all leading axes, columns = last axis.
Tensor as_image(const Tensor& kernel, std::size_t channel) {
  const Shape& ks = kernel.shape();
  Shape spatial(ks.begin() + 2, ks.end());
  const std::size_t cols = spatial.back();
  const std::size_t rows = shape_numel(spatial) / cols;
  DCLS_CHECK(ks[1] == 1, ErrorCode::kInvalidArgument,
             "kernel dumps expect one input channel per group");
  const std::size_t plane = rows * cols;
  return Tensor({rows, cols},
                std::vector<double>(kernel.data() + channel * plane,
                                    kernel.data() + (channel + 1) * plane));
}

std::string element_table(const DclsParams& params, const DclsGeometry& geom,
                          const Interpolation& interp, std::size_t channel,
                          const std::string& comment) {
  std::ostringstream out;
  out << comment << "element,weight";
  const int rank = geom.rank();
  for (int a = 0; a < rank; ++a) out << ",position" << a;
  for (int a = 0; a < rank; ++a) out << ",sigma_raw" << a;
  for (int a = 0; a < rank; ++a) out << ",sigma_eff" << a;
  out << '\n';
  const std::size_t m = params.kernel_count();
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t e = channel * params.c_in_per_group() * m + k;
    out << k << ',' << num(params.weights[e]);
    for (int a = 0; a < rank; ++a) out << ',' << num(params.positions[a][e]);
    for (int a = 0; a < rank; ++a) out << ',' << num(params.sigmas[a][e]);
    for (int a = 0; a < rank; ++a) {
      const double eff = interp.sigma0 + (interp.learns_sigma()
                                              ? std::abs(params.sigmas[a][e])
                                              : 0.0);
      out << ',' << num(eff);
    }
    out << '\n';
  }
  return out.str();
}

void dump_channel(const Network& net, std::size_t layer, std::size_t channel,
                  const fs::path& dir, const std::string& comment) {
  const DclsSlot& slot = net.dcls_slots().at(layer);
  const DclsParams params = net.dcls_params(layer);
  const ConstructedKernel built =
      construct_kernel(params, slot.geom, slot.interp, false);
  const Tensor image = as_image(built.kernel, channel);
  const std::string stem =
      "layer" + std::to_string(layer) + "_ch" + std::to_string(channel);
  write_kernel_csv(image, dir / (stem + ".csv"), comment);
  write_pgm(image, dir / (stem + ".pgm"));
  write_text(dir / (stem + "_elements.csv"),
             element_table(params, slot.geom, slot.interp, channel, comment));
}

void dump_kernels(const Network& net, const fs::path& dir,
                  const std::string& comment) {
  make_dir(dir);
  for (std::size_t l = 0; l < net.dcls_slots().size(); ++l)
    for (std::size_t c = 0; c < net.dcls_slots()[l].channels; ++c)
      dump_channel(net, l, c, dir, comment);
}

Network restore_network(const Checkpoint& ckpt, RunConfig* config_out) {
  const RunConfig config = RunConfig::parse(ckpt.config_text);
  std::mt19937_64 rng(config.seed);
  Network net = Network::build(config.model, input_shape(config),
                               config.data.classes, rng);
  restore_params(net.params(), ckpt.params);
  if (config_out) *config_out = config;
  return net;
}

}  // namespace

std::pair<Dataset, Dataset> load_datasets(const RunConfig& config) {
  const DataConfig& d = config.data;
  Dataset all;
  if (d.source == "synth") {
    SynthOptions opts;
    opts.n = d.n;
    opts.size = d.size;
    opts.classes = d.classes;
    opts.seed = config.seed;
    opts.noise = d.noise;
    all = synth_longrange(opts);
  } else if (d.source == "idx") {
    all = load_idx(d.images, d.labels);
  } else if (d.source == "csv") {
    all = load_csv(d.csv, d.height, d.width, d.classes);
  } else {
    fail(ErrorCode::kConfig, "unknown data.source '" + d.source + "'");
  }
  DCLS_CHECK(all.classes <= d.classes, ErrorCode::kConfig,
             "dataset has " + std::to_string(all.classes) +
                 " classes but data.classes=" + std::to_string(d.classes));
  all.classes = d.classes;
  auto split = split_dataset(all, d.val_fraction, config.seed);
  if (d.standardize) {
    const Dataset reference = split.first;
    standardize(split.first, reference);
    if (split.second.size() > 0) standardize(split.second, reference);
  }
  return split;
}

TrainResult run_training(const RunConfig& config, const fs::path& out,
                         std::ostream& log) {
  const OptimConfig& o = config.optim;
  DCLS_CHECK(o.epochs >= 0, ErrorCode::kConfig, "optim.epochs must be >= 0");
  DCLS_CHECK(o.batch_size > 0, ErrorCode::kConfig,
             "optim.batch_size must be positive");

  auto [train, val] = load_datasets(config);
  DCLS_CHECK(train.size() > 0, ErrorCode::kConfig, "training split is empty");
  std::mt19937_64 rng(config.seed);
  Network net = Network::build(
      config.model, {train.channels(), train.height(), train.width()},
      config.data.classes, rng);
  const std::vector<ParamGroup> groups = make_param_groups(
      net.params(), GroupPolicy{o.lr_scale_positions, o.lr_scale_sigmas});
  const OptimizerConfig opt{o.type, o.lr, o.weight_decay, o.beta1, o.beta2,
                            o.eps};
  OptimizerState state;

  const bool artifacts = !out.empty();
  const std::string comment = hash_comment(config);
  std::ofstream loss_csv;
  if (artifacts) {
    make_dir(out);
    loss_csv.open(out / "loss.csv", std::ios::binary);
    DCLS_CHECK(loss_csv.good(), ErrorCode::kIo,
               "cannot write " + (out / "loss.csv").string());
    loss_csv << comment << "epoch,train_loss,val_acc\n";
  }

  TrainResult result;
  std::vector<std::size_t> order(train.size());
  std::vector<int> labels;
  const auto batch = static_cast<std::size_t>(o.batch_size);
  for (int epoch = 1; epoch <= o.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(start + batch, order.size());
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      labels.clear();
      for (std::size_t i : idx) labels.push_back(train.labels[i]);
      const Tensor logits = net.forward(batch_images(train, idx));
      Tensor grad;
      const double loss = softmax_cross_entropy(logits, labels, &grad);
      DCLS_CHECK(std::isfinite(loss), ErrorCode::kNonFinite,
                 "non-finite training loss at epoch " + std::to_string(epoch));
      net.backward(grad);
      optimizer_step(net.params(), groups, opt, state);
      net.post_step();
      loss_sum += loss;
      ++batches;
    }
    EpochStats stats{epoch, loss_sum / static_cast<double>(batches),
                     evaluate(net, val, batch).accuracy};
    result.epochs.push_back(stats);
    log << "epoch " << epoch << " train_loss " << fixed(stats.train_loss, 6)
        << " val_acc " << fixed(stats.val_acc, 4) << '\n';
    if (artifacts) {
      loss_csv << epoch << ',' << num(stats.train_loss) << ','
               << num(stats.val_acc) << '\n';
      loss_csv.flush();
    }
  }

  if (artifacts) {
    Checkpoint ckpt;
    ckpt.config_text = config.serialize();
    std::ostringstream rng_state;
    rng_state << rng;
    ckpt.rng_state = rng_state.str();
    ckpt.epoch = o.epochs;
    ckpt.params = net.params();
    ckpt.optimizer = state;
    save_checkpoint(ckpt, out / "checkpoint.bin");
    dump_kernels(net, out / "kernels", comment);
  }
  return result;
}

int cmd_train(const RunConfig& config, const fs::path& out, std::ostream& log) {
  const TrainResult r = run_training(config, out, log);
  std::ostringstream report;
  report << hash_comment(config) << "command: train\n"
         << "epochs: " << r.epochs.size() << '\n';
  if (!r.epochs.empty()) {
    report << "first_train_loss: " << num(r.epochs.front().train_loss) << '\n'
           << "final_train_loss: " << num(r.epochs.back().train_loss) << '\n'
           << "final_val_acc: " << num(r.epochs.back().val_acc) << '\n';
  }
  write_text(out / "report.txt", report.str());
  return 0;
}

int cmd_eval(const RunConfig& config, const fs::path& checkpoint,
             const fs::path& out, std::ostream& log) {
  const Checkpoint ckpt = load_checkpoint(checkpoint);
  RunConfig saved;
  Network net = restore_network(ckpt, &saved);
  // Data overrides from the command line win over the checkpoint's copy.
  saved.data = config.data;
  auto [train, val] = load_datasets(saved);
  const auto batch = static_cast<std::size_t>(std::max(saved.optim.batch_size, 1));
  const EvalStats t = evaluate(net, train, batch);
  const EvalStats v = evaluate(net, val, batch);
  std::ostringstream report;
  report << hash_comment(saved) << "command: eval\n"
         << "checkpoint: " << checkpoint.string() << '\n'
         << "checkpoint_epoch: " << ckpt.epoch << '\n'
         << "train_samples: " << train.size() << '\n'
         << "train_loss: " << num(t.loss) << '\n'
         << "train_acc: " << num(t.accuracy) << '\n'
         << "val_samples: " << val.size() << '\n'
         << "val_loss: " << num(v.loss) << '\n'
         << "val_acc: " << num(v.accuracy) << '\n';
  make_dir(out);
  write_text(out / "report.txt", report.str());
  log << report.str();
  return 0;
}

int cmd_gradcheck(const RunConfig& config, const fs::path& out,
                  std::ostream& log) {
  const GradcheckConfig& g = config.gradcheck;
  GradCheckOptions opts;
  opts.kinds = parse_kind_list(g.kinds);
  opts.kernel_cases = g.kernel_cases;
  opts.layer_cases = g.layer_cases;
  opts.step = g.step;
  opts.kernel_tolerance = g.kernel_tolerance;
  opts.layer_tolerance = g.layer_tolerance;
  opts.seed = config.seed;
  if (g.inject_fault == "sigma_sign") {
    opts.flip_sigma_sign = true;
  } else {
    DCLS_CHECK(g.inject_fault == "none", ErrorCode::kConfig,
               "unknown gradcheck.inject_fault '" + g.inject_fault + "'");
  }

  GradCheckReport report = kernel_gradcheck(opts);
  const GradCheckReport layer = layer_gradcheck(opts);
  report.entries.insert(report.entries.end(), layer.entries.begin(),
                        layer.entries.end());
  const std::string csv =
      report.to_csv("config_hash=" + config.hash());
  make_dir(out);
  write_text(out / "report.txt", csv);
  log << csv << (report.passed() ? "gradcheck: PASS\n" : "gradcheck: FAIL\n");
  return report.passed() ? 0 : 1;
}

int cmd_inspect_kernel(const fs::path& checkpoint, std::size_t layer,
                       std::size_t channel, const fs::path& out,
                       std::ostream& log) {
  const Checkpoint ckpt = load_checkpoint(checkpoint);
  RunConfig config;
  const Network net = restore_network(ckpt, &config);
  const auto& slots = net.dcls_slots();
  DCLS_CHECK(layer < slots.size(), ErrorCode::kInvalidArgument,
             "no DCLS layer " + std::to_string(layer) + " (model has " +
                 std::to_string(slots.size()) + ")");
  DCLS_CHECK(channel < slots[layer].channels, ErrorCode::kInvalidArgument,
             "no channel " + std::to_string(channel) + " in DCLS layer " +
                 std::to_string(layer) + " (has " +
                 std::to_string(slots[layer].channels) + ")");
  const fs::path dir = out / "kernels";
  make_dir(dir);
  const std::string comment = hash_comment(config);
  dump_channel(net, layer, channel, dir, comment);
  const std::string stem =
      "layer" + std::to_string(layer) + "_ch" + std::to_string(channel);
  std::ostringstream report;
  report << comment << "command: inspect-kernel\n"
         << "layer: " << layer << '\n'
         << "channel: " << channel << '\n'
         << "interp: " << interp_name(slots[layer].interp.kind) << '\n'
         << "files: kernels/" << stem << ".csv kernels/" << stem
         << ".pgm kernels/" << stem << "_elements.csv\n";
  write_text(out / "report.txt", report.str());
  log << report.str();
  return 0;
}

int cmd_compare_interp(const RunConfig& config, const fs::path& out,
                       std::ostream& log) {
  static constexpr InterpKind kKinds[] = {
      InterpKind::kBilinear, InterpKind::kTriangle, InterpKind::kGauss};
  const std::vector<std::uint64_t> seeds = parse_seed_list(config.compare.seeds);
  DCLS_CHECK(!seeds.empty(), ErrorCode::kConfig, "compare.seeds is empty");

  std::ostringstream table;
  table << hash_comment(config) << "interp,seed,final_train_loss,final_val_acc\n";
  std::vector<std::vector<double>> finals(std::size(kKinds));
  std::ostringstream quiet;
  for (std::size_t k = 0; k < std::size(kKinds); ++k) {
    for (std::uint64_t seed : seeds) {
      RunConfig run = config;
      run.model.interp = kKinds[k];
      run.seed = seed;
      const TrainResult r = run_training(run, {}, quiet);
      const double loss = r.epochs.empty() ? std::nan("") : r.epochs.back().train_loss;
      const double acc = r.epochs.empty() ? std::nan("") : r.epochs.back().val_acc;
      finals[k].push_back(loss);
      table << interp_name(kKinds[k]) << ',' << seed << ',' << num(loss) << ','
            << num(acc) << '\n';
      log << interp_name(kKinds[k]) << " seed " << seed << " final_train_loss "
          << fixed(loss, 6) << '\n';
    }
  }
  table << "\npair,t_statistic\n";
  for (std::size_t a = 0; a < std::size(kKinds); ++a) {
    for (std::size_t b = a + 1; b < std::size(kKinds); ++b) {
      const auto t = two_sample_t(finals[a], finals[b]);
      table << interp_name(kKinds[a]) << '-' << interp_name(kKinds[b]) << ','
            << (t ? num(*t) : std::string("n/a")) << '\n';
    }
  }
  make_dir(out);
  write_text(out / "report.txt", table.str());
  log << table.str();
  return 0;
}

std::optional<double> two_sample_t(std::span<const double> a,
                                   std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) return std::nullopt;
  auto mean = [](std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  auto ss = [](std::span<const double> v, double m) {
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s;
  };
  const double ma = mean(a), mb = mean(b);
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  const double pooled = (ss(a, ma) + ss(b, mb)) / (na + nb - 2.0);
  const double se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  if (ma == mb) return 0.0;
  if (se == 0.0) return std::nullopt;
  return (ma - mb) / se;
}

void write_pgm(const Tensor& image, const fs::path& path) {
  DCLS_CHECK(image.rank() == 2 && !image.empty(), ErrorCode::kInvalidArgument,
             "PGM export needs a non-empty [H, W] tensor");
  const auto [lo_it, hi_it] =
      std::minmax_element(image.values().begin(), image.values().end());
  const double lo = *lo_it, hi = *hi_it;
  std::string bytes = "P5\n" + std::to_string(image.dim(1)) + " " +
                      std::to_string(image.dim(0)) + "\n255\n";
  for (double v : image.values()) {
    const double scaled = hi > lo ? (v - lo) / (hi - lo) * 255.0 : 0.0;
    bytes.push_back(static_cast<char>(
        static_cast<unsigned char>(std::lround(std::clamp(scaled, 0.0, 255.0)))));
  }
  write_text(path, bytes);
}

void write_kernel_csv(const Tensor& image, const fs::path& path,
                      const std::string& comment) {
  DCLS_CHECK(image.rank() == 2, ErrorCode::kInvalidArgument,
             "kernel CSV export needs an [H, W] tensor");
  std::ostringstream out;
  out << comment << "row";
  for (std::size_t c = 0; c < image.dim(1); ++c) out << ",c" << c;
  out << '\n';
  for (std::size_t r = 0; r < image.dim(0); ++r) {
    out << r;
    for (std::size_t c = 0; c < image.dim(1); ++c)
      out << ',' << num(image[r * image.dim(1) + c]);
    out << '\n';
  }
  write_text(path, out.str());
}

}  // namespace dcls
