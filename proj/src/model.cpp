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

#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace dcls {

struct Network::Shared {
  ParamStore store;
  // Position and sigma gradients of each DCLS slot from the latest backward,
  // positions per axis then sigmas per axis.
  std::vector<std::vector<Tensor>> pending;
};

namespace {

std::size_t add_param(ParamStore& store, std::string name, ParamKind kind,
                      Tensor value) {
  Parameter p;
  p.name = std::move(name);
  p.kind = kind;
  p.grad = Tensor(value.shape());
  p.value = std::move(value);
  store.push_back(std::move(p));
  return store.size() - 1;
}

Tensor uniform_tensor(Shape shape, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = dist(rng);
  return t;
}

class PointwiseLayer final : public Layer {
 public:
  PointwiseLayer(ParamStore* store, std::size_t weight, std::size_t bias)
      : store_(store), weight_(weight), bias_(bias) {}

  std::string describe() const override {
    const Shape& s = (*store_)[weight_].value.shape();
    return "pointwise " + std::to_string(s[1]) + "->" + std::to_string(s[0]);
  }

  Tensor forward(const Tensor& x) override {
    input_ = x;
    const Tensor& w = (*store_)[weight_].value;
    const Tensor& b = (*store_)[bias_].value;
    const std::size_t n = x.dim(0), cin = x.dim(1), cout = w.dim(0);
    DCLS_CHECK(w.dim(1) == cin, ErrorCode::kShapeMismatch,
               "pointwise layer expects " + std::to_string(w.dim(1)) +
                   " channels, got " + std::to_string(cin));
    const std::size_t plane = x.size() / (n * cin);
    Shape out_shape = x.shape();
    out_shape[1] = cout;
    Tensor out(out_shape);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t o = 0; o < cout; ++o) {
        double* dst = out.data() + (s * cout + o) * plane;
        std::fill(dst, dst + plane, b[o]);
        for (std::size_t i = 0; i < cin; ++i) {
          const double wv = w[o * cin + i];
          const double* src = x.data() + (s * cin + i) * plane;
          for (std::size_t p = 0; p < plane; ++p) dst[p] += wv * src[p];
        }
      }
    return out;
  }

  Tensor backward(const Tensor& grad) override {
    const Tensor& w = (*store_)[weight_].value;
    Tensor& gw = (*store_)[weight_].grad;
    Tensor& gb = (*store_)[bias_].grad;
    const std::size_t n = input_.dim(0), cin = input_.dim(1), cout = w.dim(0);
    const std::size_t plane = input_.size() / (n * cin);
    Tensor gx(input_.shape());
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t o = 0; o < cout; ++o) {
        const double* g = grad.data() + (s * cout + o) * plane;
        double bsum = 0.0;
        for (std::size_t p = 0; p < plane; ++p) bsum += g[p];
        gb[o] += bsum;
        for (std::size_t i = 0; i < cin; ++i) {
          const double* src = input_.data() + (s * cin + i) * plane;
          double* dst = gx.data() + (s * cin + i) * plane;
          const double wv = w[o * cin + i];
          double acc = 0.0;
          for (std::size_t p = 0; p < plane; ++p) {
            acc += g[p] * src[p];
            dst[p] += wv * g[p];
          }
          gw[o * cin + i] += acc;
        }
      }
    return gx;
  }

 private:
  ParamStore* store_;
  std::size_t weight_, bias_;
  Tensor input_;
};

class ReluLayer final : public Layer {
 public:
  std::string describe() const override { return "relu"; }
  Tensor forward(const Tensor& x) override {
    out_ = x;
    for (double& v : out_.values()) v = std::max(v, 0.0);
    return out_;
  }
  Tensor backward(const Tensor& grad) override {
    Tensor gx = grad;
    for (std::size_t i = 0; i < gx.size(); ++i)
      if (out_[i] <= 0.0) gx[i] = 0.0;
    return gx;
  }

 private:
  Tensor out_;
};

class AvgPoolLayer final : public Layer {
 public:
  explicit AvgPoolLayer(std::size_t k) : k_(k) {}
  std::string describe() const override {
    return "avgpool " + std::to_string(k_);
  }
  Tensor forward(const Tensor& x) override {
    DCLS_CHECK(x.rank() == 4, ErrorCode::kShapeMismatch,
               "avgpool expects [N, C, H, W]");
    in_shape_ = x.shape();
    const std::size_t h = x.dim(2), w = x.dim(3), oh = h / k_, ow = w / k_;
    DCLS_CHECK(oh >= 1 && ow >= 1, ErrorCode::kShapeMismatch,
               "avgpool window larger than input");
    Tensor out({x.dim(0), x.dim(1), oh, ow});
    const double inv = 1.0 / static_cast<double>(k_ * k_);
    for (std::size_t plane = 0; plane < x.dim(0) * x.dim(1); ++plane) {
      const double* src = x.data() + plane * h * w;
      double* dst = out.data() + plane * oh * ow;
      for (std::size_t i = 0; i < oh; ++i)
        for (std::size_t j = 0; j < ow; ++j) {
          double s = 0.0;
          for (std::size_t a = 0; a < k_; ++a)
            for (std::size_t b = 0; b < k_; ++b)
              s += src[(i * k_ + a) * w + j * k_ + b];
          dst[i * ow + j] = s * inv;
        }
    }
    return out;
  }
  Tensor backward(const Tensor& grad) override {
    Tensor gx(in_shape_);
    const std::size_t h = in_shape_[2], w = in_shape_[3];
    const std::size_t oh = grad.dim(2), ow = grad.dim(3);
    const double inv = 1.0 / static_cast<double>(k_ * k_);
    for (std::size_t plane = 0; plane < in_shape_[0] * in_shape_[1]; ++plane) {
      const double* g = grad.data() + plane * oh * ow;
      double* dst = gx.data() + plane * h * w;
      for (std::size_t i = 0; i < oh; ++i)
        for (std::size_t j = 0; j < ow; ++j)
          for (std::size_t a = 0; a < k_; ++a)
            for (std::size_t b = 0; b < k_; ++b)
              dst[(i * k_ + a) * w + j * k_ + b] = g[i * ow + j] * inv;
    }
    return gx;
  }

 private:
  std::size_t k_;
  Shape in_shape_;
};

class GlobalAvgPoolLayer final : public Layer {
 public:
  std::string describe() const override { return "global avgpool"; }
  Tensor forward(const Tensor& x) override {
    in_shape_ = x.shape();
    const std::size_t planes = x.dim(0) * x.dim(1);
    const std::size_t plane = x.size() / planes;
    Tensor out({x.dim(0), x.dim(1)});
    for (std::size_t p = 0; p < planes; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < plane; ++i) s += x[p * plane + i];
      out[p] = s / static_cast<double>(plane);
    }
    return out;
  }
  Tensor backward(const Tensor& grad) override {
    Tensor gx(in_shape_);
    const std::size_t planes = in_shape_[0] * in_shape_[1];
    const std::size_t plane = gx.size() / planes;
    for (std::size_t p = 0; p < planes; ++p)
      std::fill_n(gx.data() + p * plane, plane,
                  grad[p] / static_cast<double>(plane));
    return gx;
  }

 private:
  Shape in_shape_;
};

// Ties go to the first maximum in row-major order.
class GlobalMaxPoolLayer final : public Layer {
 public:
  std::string describe() const override { return "global maxpool"; }
  Tensor forward(const Tensor& x) override {
    in_shape_ = x.shape();
    const std::size_t planes = x.dim(0) * x.dim(1);
    const std::size_t plane = x.size() / planes;
    Tensor out({x.dim(0), x.dim(1)});
    argmax_.assign(planes, 0);
    for (std::size_t p = 0; p < planes; ++p) {
      const double* row = x.data() + p * plane;
      argmax_[p] = static_cast<std::size_t>(std::max_element(row, row + plane) - row);
      out[p] = row[argmax_[p]];
    }
    return out;
  }
  Tensor backward(const Tensor& grad) override {
    Tensor gx(in_shape_);
    const std::size_t planes = in_shape_[0] * in_shape_[1];
    const std::size_t plane = gx.size() / planes;
    for (std::size_t p = 0; p < planes; ++p) gx[p * plane + argmax_[p]] = grad[p];
    return gx;
  }

 private:
  Shape in_shape_;
  std::vector<std::size_t> argmax_;
};

class LinearLayer final : public Layer {
 public:
  LinearLayer(ParamStore* store, std::size_t weight, std::size_t bias)
      : store_(store), weight_(weight), bias_(bias) {}
  std::string describe() const override {
    const Shape& s = (*store_)[weight_].value.shape();
    return "linear " + std::to_string(s[1]) + "->" + std::to_string(s[0]);
  }
  Tensor forward(const Tensor& x) override {
    in_shape_ = x.shape();
    const Tensor& w = (*store_)[weight_].value;
    const Tensor& b = (*store_)[bias_].value;
    const std::size_t n = x.dim(0), f = x.size() / n, o = w.dim(0);
    DCLS_CHECK(w.dim(1) == f, ErrorCode::kShapeMismatch,
               "linear layer expects " + std::to_string(w.dim(1)) +
                   " features, got " + std::to_string(f));
    input_ = x.reshaped({n, f});
    Tensor out({n, o});
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t j = 0; j < o; ++j) {
        double acc = b[j];
        for (std::size_t i = 0; i < f; ++i)
          acc += w[j * f + i] * input_[s * f + i];
        out[s * o + j] = acc;
      }
    return out;
  }
  Tensor backward(const Tensor& grad) override {
    const Tensor& w = (*store_)[weight_].value;
    Tensor& gw = (*store_)[weight_].grad;
    Tensor& gb = (*store_)[bias_].grad;
    const std::size_t n = input_.dim(0), f = input_.dim(1), o = w.dim(0);
    Tensor gx({n, f});
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t j = 0; j < o; ++j) {
        const double g = grad[s * o + j];
        gb[j] += g;
        for (std::size_t i = 0; i < f; ++i) {
          gw[j * f + i] += g * input_[s * f + i];
          gx[s * f + i] += g * w[j * f + i];
        }
      }
    return gx.reshaped(in_shape_);
  }

 private:
  ParamStore* store_;
  std::size_t weight_, bias_;
  Tensor input_;
  Shape in_shape_;
};

}  // namespace

class DclsDepthwiseLayer final : public Layer {
 public:
  DclsDepthwiseLayer(Network::Shared* shared, DclsSlot slot, std::size_t index)
      : shared_(shared), slot_(std::move(slot)), index_(index) {
    spec_ = ConvSpec::same(slot_.geom.dilated_size,
                           static_cast<int>(slot_.channels));
  }

  std::string describe() const override {
    std::ostringstream s;
    s << "dcls depthwise c=" << slot_.channels
      << " m=" << slot_.geom.kernel_count << " s=";
    for (std::size_t a = 0; a < slot_.geom.dilated_size.size(); ++a)
      s << (a ? "x" : "") << slot_.geom.dilated_size[a];
    s << " " << interp_name(slot_.interp.kind);
    return s.str();
  }

  Tensor forward(const Tensor& x) override {
    return dcls_layer_forward(x, gather(), slot_.geom, slot_.interp, spec_,
                              &cache_);
  }

  Tensor backward(const Tensor& grad) override {
    DclsLayerGrads g = dcls_layer_backward(cache_, spec_, grad);
    shared_->store[slot_.weight].grad += g.params.weights;
    std::vector<Tensor>& pending = shared_->pending[index_];
    pending.clear();
    for (Tensor& t : g.params.positions) pending.push_back(std::move(t));
    for (Tensor& t : g.params.sigmas) pending.push_back(std::move(t));
    return std::move(g.input);
  }

  DclsParams gather() const {
    const ParamStore& store = shared_->store;
    DclsParams p;
    p.weights = store[slot_.weight].value;
    for (std::size_t i : slot_.positions) p.positions.push_back(store[i].value);
    for (std::size_t i : slot_.sigmas) p.sigmas.push_back(store[i].value);
    return p;
  }

 private:
  Network::Shared* shared_;
  DclsSlot slot_;
  std::size_t index_;
  ConvSpec spec_;
  DclsLayerCache cache_;
};

Network::Network() : shared_(std::make_unique<Shared>()) {}
Network::Network(Network&&) noexcept = default;
Network& Network::operator=(Network&&) noexcept = default;
Network::~Network() = default;

ParamStore& Network::params() { return shared_->store; }
const ParamStore& Network::params() const { return shared_->store; }

Network Network::build(const ModelConfig& config, const Shape& input,
                       int classes, std::mt19937_64& rng) {
  DCLS_CHECK(input.size() == 3, ErrorCode::kShapeMismatch,
             "network input must be [C, H, W]");
  DCLS_CHECK(classes >= 1, ErrorCode::kConfig, "need at least one class");
  DCLS_CHECK(config.sync == "none" || config.sync == "auto", ErrorCode::kConfig,
             "model.sync must be none or auto, got '" + config.sync + "'");

  Network net;
  ParamStore& store = net.shared_->store;
  std::size_t channels = input[0];
  std::size_t height = input[1];
  std::size_t width = input[2];
  bool flat = false;

  std::vector<std::string> tokens;
  {
    std::stringstream ss(config.layers);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto b = tok.find_first_not_of(" \t");
      const auto e = tok.find_last_not_of(" \t");
      if (b != std::string::npos) tokens.push_back(tok.substr(b, e - b + 1));
    }
  }
  DCLS_CHECK(!tokens.empty(), ErrorCode::kConfig, "model.layers is empty");

  struct PendingDcls {
    DclsSlot slot;
    DclsParams init;
  };
  std::vector<PendingDcls> dcls;
  std::vector<std::size_t> dcls_layer_pos;

  for (std::size_t li = 0; li < tokens.size(); ++li) {
    const std::string& tok = tokens[li];
    std::vector<std::string> parts;
    {
      std::stringstream ss(tok);
      std::string part;
      while (std::getline(ss, part, ':')) parts.push_back(part);
    }
    const std::string& kind = parts[0];
    const std::string prefix = "layer" + std::to_string(li) + ".";
    auto need_spatial = [&] {
      DCLS_CHECK(!flat, ErrorCode::kConfig,
                 "layer '" + tok + "' needs spatial input but follows gap/fc");
    };
    auto int_arg = [&](const std::string& v) {
      try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos == v.size() && x > 0) return x;
      } catch (const std::exception&) {
      }
      fail(ErrorCode::kConfig, "bad argument in layer token '" + tok + "'");
    };

    if (kind == "pw") {
      need_spatial();
      DCLS_CHECK(parts.size() == 2, ErrorCode::kConfig,
                 "pointwise layer needs pw:C, got '" + tok + "'");
      const auto cout = static_cast<std::size_t>(int_arg(parts[1]));
      const double bound = 1.0 / std::sqrt(static_cast<double>(channels));
      const std::size_t w = add_param(store, prefix + "weight", ParamKind::kWeight,
                                      uniform_tensor({cout, channels}, bound, rng));
      const std::size_t b = add_param(store, prefix + "bias", ParamKind::kOther,
                                      uniform_tensor({cout}, bound, rng));
      net.layers_.push_back(std::make_unique<PointwiseLayer>(&store, w, b));
      channels = cout;
    } else if (kind == "dcls") {
      need_spatial();
      DclsSlot slot;
      slot.layer_index = li;
      slot.channels = channels;
      slot.geom.kernel_count = config.kernel_count;
      int s = config.dilated_size;
      InterpKind ik = config.interp;
      for (std::size_t pi = 1; pi < parts.size(); ++pi) {
        const auto eq = parts[pi].find('=');
        DCLS_CHECK(eq != std::string::npos, ErrorCode::kConfig,
                   "dcls option must be key=value in '" + tok + "'");
        const std::string k = parts[pi].substr(0, eq);
        const std::string v = parts[pi].substr(eq + 1);
        if (k == "m") slot.geom.kernel_count = int_arg(v);
        else if (k == "s") s = int_arg(v);
        else if (k == "kind") ik = parse_interp_kind(v);
        else fail(ErrorCode::kConfig, "unknown dcls option '" + k + "'");
      }
      slot.geom.dilated_size = {s, s};
      slot.geom.validate();
      slot.interp = Interpolation::of(ik);
      DclsParams init = init_params(channels, 1, slot.geom, slot.interp, rng,
                                     config.position_init_std);
      dcls_layer_pos.push_back(net.layers_.size());
      net.layers_.push_back(nullptr);  // filled once sync groups are known
      dcls.push_back({std::move(slot), std::move(init)});
    } else if (kind == "relu") {
      net.layers_.push_back(std::make_unique<ReluLayer>());
    } else if (kind == "pool") {
      need_spatial();
      DCLS_CHECK(parts.size() == 2, ErrorCode::kConfig,
                 "pool layer needs pool:K, got '" + tok + "'");
      const auto k = static_cast<std::size_t>(int_arg(parts[1]));
      height /= k;
      width /= k;
      DCLS_CHECK(height >= 1 && width >= 1, ErrorCode::kConfig,
                 "pooling reduces the input below 1x1");
      net.layers_.push_back(std::make_unique<AvgPoolLayer>(k));
    } else if (kind == "gap") {
      need_spatial();
      flat = true;
      height = width = 1;
      net.layers_.push_back(std::make_unique<GlobalAvgPoolLayer>());
    } else if (kind == "gmp") {
      need_spatial();
      flat = true;
      height = width = 1;
      net.layers_.push_back(std::make_unique<GlobalMaxPoolLayer>());
    } else if (kind == "fc") {
      const std::size_t features = channels * height * width;
      const double bound = 1.0 / std::sqrt(static_cast<double>(features));
      const auto cls = static_cast<std::size_t>(classes);
      const std::size_t w = add_param(store, prefix + "weight", ParamKind::kWeight,
                                      uniform_tensor({cls, features}, bound, rng));
      const std::size_t b = add_param(store, prefix + "bias", ParamKind::kOther,
                                      uniform_tensor({cls}, bound, rng));
      net.layers_.push_back(std::make_unique<LinearLayer>(&store, w, b));
      channels = cls;
      height = width = 1;
      flat = true;
    } else {
      fail(ErrorCode::kConfig, "unknown layer token '" + tok + "'");
    }
  }
  DCLS_CHECK(flat && tokens.back().rfind("fc", 0) == 0, ErrorCode::kConfig,
             "model.layers must end with fc");

  // Sync groups over DCLS layers; each group owns one position/sigma storage.
  std::vector<SyncSignature> sigs;
  for (const auto& d : dcls)
    sigs.push_back({d.slot.channels, 1, d.slot.geom, d.slot.interp.kind});
  if (config.sync == "auto") {
    net.sync_groups_ = auto_sync_groups(sigs);
  } else {
    for (std::size_t i = 0; i < dcls.size(); ++i)
      net.sync_groups_.push_back(SyncGroup{{i}});
  }

  std::vector<std::size_t> owner(dcls.size());
  for (const SyncGroup& g : net.sync_groups_)
    for (std::size_t m : g.members) owner[m] = g.members.front();

  for (std::size_t i = 0; i < dcls.size(); ++i) {
    DclsSlot& slot = dcls[i].slot;
    const std::string prefix = "layer" + std::to_string(slot.layer_index) + ".";
    slot.weight = add_param(store, prefix + "weight", ParamKind::kWeight,
                            std::move(dcls[i].init.weights));
    if (owner[i] == i) {
      for (int a = 0; a < slot.geom.rank(); ++a) {
        slot.positions.push_back(add_param(
            store, prefix + "position" + std::to_string(a), ParamKind::kPosition,
            std::move(dcls[i].init.positions[a])));
      }
      for (int a = 0; a < slot.geom.rank(); ++a) {
        slot.sigmas.push_back(add_param(
            store, prefix + "sigma" + std::to_string(a), ParamKind::kSigma,
            std::move(dcls[i].init.sigmas[a])));
      }
    } else {
      slot.positions = dcls[owner[i]].slot.positions;
      slot.sigmas = dcls[owner[i]].slot.sigmas;
    }
    net.slots_.push_back(slot);
    net.layers_[dcls_layer_pos[i]] =
        std::make_unique<DclsDepthwiseLayer>(net.shared_.get(), slot, i);
  }
  net.shared_->pending.resize(dcls.size());
  return net;
}

Tensor Network::forward(const Tensor& x) {
  Tensor h = x;
  for (auto& layer : layers_) h = layer->forward(h);
  return h;
}

void Network::backward(const Tensor& grad_logits) {
  zero_grads(shared_->store);
  Tensor g = grad_logits;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
    g = (*it)->backward(g);

  for (const SyncGroup& group : sync_groups_) {
    std::vector<std::vector<Tensor>> member_grads;
    for (std::size_t m : group.members)
      member_grads.push_back(shared_->pending[m]);
    std::vector<Tensor> total = sync_group_step(member_grads);
    const DclsSlot& slot = slots_[group.members.front()];
    const std::size_t rank = slot.positions.size();
    for (std::size_t a = 0; a < rank; ++a) {
      shared_->store[slot.positions[a]].grad = std::move(total[a]);
      shared_->store[slot.sigmas[a]].grad = std::move(total[rank + a]);
    }
  }
}

std::vector<std::string> Network::describe() const {
  std::vector<std::string> out;
  for (const auto& layer : layers_) out.push_back(layer->describe());
  return out;
}

DclsParams Network::dcls_params(std::size_t i) const {
  DCLS_CHECK(i < slots_.size(), ErrorCode::kInvalidArgument,
             "no DCLS layer with index " + std::to_string(i) + " (model has " +
                 std::to_string(slots_.size()) + ")");
  const DclsSlot& slot = slots_[i];
  const ParamStore& store = shared_->store;
  DclsParams p;
  p.weights = store[slot.weight].value;
  for (std::size_t k : slot.positions) p.positions.push_back(store[k].value);
  for (std::size_t k : slot.sigmas) p.sigmas.push_back(store[k].value);
  return p;
}

void Network::post_step() {
  for (const SyncGroup& group : sync_groups_) {
    const DclsSlot& slot = slots_[group.members.front()];
    DclsParams p = post_step_hook(dcls_params(group.members.front()),
                                  slot.geom, slot.interp);
    for (std::size_t a = 0; a < slot.positions.size(); ++a)
      shared_->store[slot.positions[a]].value = std::move(p.positions[a]);
  }
}

double softmax_cross_entropy(const Tensor& logits, std::span<const int> labels,
                             Tensor* grad) {
  DCLS_CHECK(logits.rank() == 2 && logits.dim(0) == labels.size(),
             ErrorCode::kShapeMismatch,
             "logits " + shape_str(logits.shape()) + " vs " +
                 std::to_string(labels.size()) + " labels");
  const std::size_t n = logits.dim(0), c = logits.dim(1);
  if (grad) *grad = Tensor(logits.shape());
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double* row = logits.data() + s * c;
    const double mx = *std::max_element(row, row + c);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += std::exp(row[j] - mx);
    const double log_z = mx + std::log(z);
    const auto label = static_cast<std::size_t>(labels[s]);
    DCLS_CHECK(label < c, ErrorCode::kInvalidArgument, "label out of range");
    total += log_z - row[label];
    if (grad) {
      for (std::size_t j = 0; j < c; ++j) {
        const double p = std::exp(row[j] - log_z);
        (*grad)[s * c + j] = (p - (j == label ? 1.0 : 0.0)) / n;
      }
    }
  }
  return total / n;
}

std::size_t count_correct(const Tensor& logits, std::span<const int> labels) {
  const std::size_t n = logits.dim(0), c = logits.dim(1);
  std::size_t correct = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const double* row = logits.data() + s * c;
    const auto best = static_cast<int>(std::max_element(row, row + c) - row);
    if (best == labels[s]) ++correct;
  }
  return correct;
}

}  // namespace dcls
