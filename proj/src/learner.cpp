/**
 * Copyright 2026 The hflsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "hflsim/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hflsim/rng.hpp"

namespace hflsim {

void Dataset::validate() const {
  if (features.size() != labels.size() * static_cast<size_t>(dims)) {
    throw std::invalid_argument("dataset: feature rows do not match labels");
  }
  for (uint32_t y : labels) {
    if (y >= static_cast<uint32_t>(classes)) throw std::invalid_argument("dataset: label range");
  }
}

size_t ModelShape::param_count() const {
  if (hidden <= 0) return static_cast<size_t>(classes) * (dims + 1);
  return static_cast<size_t>(hidden) * (dims + 1) + static_cast<size_t>(classes) * (hidden + 1);
}

void ModelParams::validate() const {
  if (w.size() != shape.param_count()) throw std::invalid_argument("model: size/shape mismatch");
  for (double v : w) {
    if (!std::isfinite(v)) throw std::invalid_argument("model: non-finite parameter");
  }
}

void TrainConfig::validate() const {
  if (!(eta >= 0) || h < 0 || !(batch_fraction > 0 && batch_fraction <= 1)) {
    throw std::invalid_argument("train config out of range");
  }
}

ModelParams init_model(const ModelShape &shape, uint64_t seed) {
  ModelParams m;
  m.shape = shape;
  m.w.resize(shape.param_count());
  Rng rng = Rng::stream(seed, "model-init");
  for (double &v : m.w) v = 0.01 * rng.normal();
  return m;
}

void softmax_inplace(double *v, int n) {
  double mx = *std::max_element(v, v + n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = std::exp(v[i] - mx);
    s += v[i];
  }
  for (int i = 0; i < n; ++i) v[i] /= s;
}

namespace {

// Hidden activations (tanh) for the two-layer model.
void hidden_layer(const ModelParams &m, const float *x, double *hdn) {
  const ModelShape &s = m.shape;
  const double *w1 = m.w.data();
  const double *b1 = w1 + static_cast<size_t>(s.hidden) * s.dims;
  for (int j = 0; j < s.hidden; ++j) {
    double a = b1[j];
    for (int d = 0; d < s.dims; ++d) a += w1[j * s.dims + d] * x[d];
    hdn[j] = std::tanh(a);
  }
}

}  // namespace

void forward(const ModelParams &m, const float *x, double *logits) {
  const ModelShape &s = m.shape;
  if (s.hidden <= 0) {
    const double *w = m.w.data();
    const double *b = w + static_cast<size_t>(s.classes) * s.dims;
    for (int c = 0; c < s.classes; ++c) {
      double z = b[c];
      for (int d = 0; d < s.dims; ++d) z += w[c * s.dims + d] * x[d];
      logits[c] = z;
    }
    return;
  }
  std::vector<double> hdn(s.hidden);
  hidden_layer(m, x, hdn.data());
  const double *w2 = m.w.data() + static_cast<size_t>(s.hidden) * (s.dims + 1);
  const double *b2 = w2 + static_cast<size_t>(s.classes) * s.hidden;
  for (int c = 0; c < s.classes; ++c) {
    double z = b2[c];
    for (int j = 0; j < s.hidden; ++j) z += w2[c * s.hidden + j] * hdn[j];
    logits[c] = z;
  }
}

double loss_and_grad(const ModelParams &m, const Dataset &data,
                     const std::vector<size_t> &indices, std::vector<double> *grad) {
  const ModelShape &s = m.shape;
  if (s.dims != data.dims || s.classes != data.classes) {
    throw std::invalid_argument("loss_and_grad: model/data dimensions differ");
  }
  if (indices.empty()) return 0.0;
  if (grad) grad->assign(m.w.size(), 0.0);
  std::vector<double> p(s.classes);
  std::vector<double> hdn(std::max(s.hidden, 0));
  std::vector<double> dh(std::max(s.hidden, 0));
  double inv = 1.0 / static_cast<double>(indices.size());
  double loss = 0.0;
  for (size_t idx : indices) {
    const float *x = data.row(idx);
    uint32_t y = data.labels[idx];
    forward(m, x, p.data());
    softmax_inplace(p.data(), s.classes);
    loss -= std::log(std::max(p[y], 1e-300));
    if (!grad) continue;
    p[y] -= 1.0;  // dL/dz
    double *g = grad->data();
    if (s.hidden <= 0) {
      double *gb = g + static_cast<size_t>(s.classes) * s.dims;
      for (int c = 0; c < s.classes; ++c) {
        double dz = p[c] * inv;
        for (int d = 0; d < s.dims; ++d) g[c * s.dims + d] += dz * x[d];
        gb[c] += dz;
      }
      continue;
    }
    hidden_layer(m, x, hdn.data());
    size_t off2 = static_cast<size_t>(s.hidden) * (s.dims + 1);
    const double *w2 = m.w.data() + off2;
    double *gw2 = g + off2;
    double *gb2 = gw2 + static_cast<size_t>(s.classes) * s.hidden;
    std::fill(dh.begin(), dh.end(), 0.0);
    for (int c = 0; c < s.classes; ++c) {
      double dz = p[c] * inv;
      for (int j = 0; j < s.hidden; ++j) {
        gw2[c * s.hidden + j] += dz * hdn[j];
        dh[j] += dz * w2[c * s.hidden + j];
      }
      gb2[c] += dz;
    }
    double *gb1 = g + static_cast<size_t>(s.hidden) * s.dims;
    for (int j = 0; j < s.hidden; ++j) {
      double da = dh[j] * (1.0 - hdn[j] * hdn[j]);
      for (int d = 0; d < s.dims; ++d) g[j * s.dims + d] += da * x[d];
      gb1[j] += da;
    }
  }
  return loss * inv;
}

ModelParams local_sgd(const ModelParams &model, const Dataset &data, const TrainConfig &cfg) {
  cfg.validate();
  ModelParams out = model;
  size_t n = data.size();
  if (n == 0 || cfg.h == 0 || cfg.eta == 0.0) return out;
  size_t batch = static_cast<size_t>(std::ceil(cfg.batch_fraction * static_cast<double>(n)));
  batch = std::clamp<size_t>(batch, 1, n);
  std::vector<size_t> perm(n);
  std::vector<size_t> idx(batch);
  std::vector<double> grad;
  for (int step = 0; step < cfg.h; ++step) {
    Rng rng = Rng::stream(cfg.seed, "sgd-batch", static_cast<uint64_t>(step));
    std::iota(perm.begin(), perm.end(), size_t{0});
    for (size_t i = 0; i < batch; ++i) {
      size_t j = i + rng.below(n - i);
      std::swap(perm[i], perm[j]);
      idx[i] = perm[i];
    }
    loss_and_grad(out, data, idx, &grad);
    for (size_t i = 0; i < grad.size(); ++i) {
      if (!std::isfinite(grad[i])) {
        std::ostringstream os;
        os << "local_sgd: non-finite gradient at coordinate " << i << " (step " << step
           << ", owner " << data.owner << ")";
        throw std::runtime_error(os.str());
      }
      out.w[i] -= cfg.eta * grad[i];
    }
    out.h = step + 1;
  }
  return out;
}

ModelParams fedavg(const std::vector<const ModelParams *> &models,
                   const std::vector<double> &weights) {
  if (models.empty() || models.size() != weights.size()) {
    throw std::invalid_argument("fedavg: empty input or weight count mismatch");
  }
  ModelParams out = *models[0];
  double total = 0.0;
  for (size_t i = 0; i < models.size(); ++i) {
    if (!(models[i]->shape == out.shape) || models[i]->w.size() != out.w.size()) {
      throw std::invalid_argument("fedavg: shape mismatch");
    }
    if (!(weights[i] > 0)) throw std::invalid_argument("fedavg: weights must be positive");
    total += weights[i];
  }
  std::fill(out.w.begin(), out.w.end(), 0.0);
  for (size_t i = 0; i < models.size(); ++i) {
    double a = weights[i] / total;
    const auto &w = models[i]->w;
    for (size_t j = 0; j < w.size(); ++j) out.w[j] += a * w[j];
  }
  return out;
}

ModelParams fedavg(const std::vector<ModelParams> &models, const std::vector<double> &weights) {
  std::vector<const ModelParams *> ptrs;
  ptrs.reserve(models.size());
  for (const auto &m : models) ptrs.push_back(&m);
  return fedavg(ptrs, weights);
}

double l2_distance(const ModelParams &a, const ModelParams &b) {
  if (a.w.size() != b.w.size()) throw std::invalid_argument("l2_distance: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.w.size(); ++i) s += (a.w[i] - b.w[i]) * (a.w[i] - b.w[i]);
  return std::sqrt(s);
}

bool converged(const ModelParams &w_g, const ModelParams &w_prev, double delta) {
  return l2_distance(w_g, w_prev) <= delta;
}

double kld_score(const ModelParams &uav_model, const ModelParams &dev_model,
                 const Dataset &probe) {
  int c = uav_model.shape.classes;
  std::vector<double> p(c);
  std::vector<double> q(c);
  double total = 0.0;
  for (size_t j = 0; j < probe.size(); ++j) {
    forward(uav_model, probe.row(j), p.data());
    forward(dev_model, probe.row(j), q.data());
    softmax_inplace(p.data(), c);
    softmax_inplace(q.data(), c);
    for (int i = 0; i < c; ++i) {
      if (p[i] > 0) total += p[i] * (std::log(p[i]) - std::log(std::max(q[i], 1e-300)));
    }
  }
  return std::max(total, 0.0);
}

Metrics eval_metrics(const ModelParams &model, const Dataset &data) {
  Metrics m;
  if (data.size() == 0) return m;
  int c = model.shape.classes;
  std::vector<double> p(c);
  size_t correct = 0;
  double loss = 0.0;
  for (size_t j = 0; j < data.size(); ++j) {
    forward(model, data.row(j), p.data());
    softmax_inplace(p.data(), c);
    uint32_t y = data.labels[j];
    loss -= std::log(std::max(p[y], 1e-300));
    if (static_cast<uint32_t>(std::max_element(p.begin(), p.end()) - p.begin()) == y) ++correct;
  }
  m.loss = loss / static_cast<double>(data.size());
  m.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  return m;
}

std::pair<double, double> delta_metrics(const Metrics &prev, const Metrics &cur) {
  return {prev.loss - cur.loss, cur.accuracy - prev.accuracy};
}

ModelParams train_personalized(const Dataset &seed_data, const ModelParams &init,
                               const TrainConfig &cfg) {
  if (seed_data.size() == 0) throw std::invalid_argument("train_personalized: empty seed data");
  return local_sgd(init, seed_data, cfg);
}

namespace {

void append_sample(Dataset &d, Rng &rng, uint32_t label, const SynthSpec &spec) {
  double ang = 2.0 * std::numbers::pi * label / spec.classes;
  d.features.push_back(
      static_cast<float>(spec.center_radius * std::cos(ang) + spec.cluster_std * rng.normal()));
  d.features.push_back(
      static_cast<float>(spec.center_radius * std::sin(ang) + spec.cluster_std * rng.normal()));
  d.labels.push_back(label);
}

}  // namespace

std::vector<Dataset> synth_noniid(int n_devices, NoniidScheme scheme, int samples_per_device,
                                  uint64_t seed, const SynthSpec &spec) {
  if (n_devices < 1) throw std::invalid_argument("synth_noniid: need at least one device");
  if (spec.classes < 2) throw std::invalid_argument("synth_noniid: need at least two classes");
  std::vector<Dataset> out;
  for (int n = 0; n < n_devices; ++n) {
    Rng rng = Rng::stream(seed, "data", static_cast<uint64_t>(n));
    int k = 2;
    if (scheme == NoniidScheme::kB) {
      k = 2 + static_cast<int>(rng.below(static_cast<uint64_t>(std::min(spec.classes, 10) - 1)));
    }
    std::vector<uint32_t> pool(spec.classes);
    std::iota(pool.begin(), pool.end(), 0u);
    for (int i = 0; i < k; ++i) {
      size_t j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    Dataset d;
    d.dims = 2;
    d.classes = spec.classes;
    d.owner = n;
    for (int i = 0; i < samples_per_device; ++i) append_sample(d, rng, pool[i % k], spec);
    out.push_back(std::move(d));
  }
  return out;
}

Dataset synth_balanced(int n, uint64_t seed, const SynthSpec &spec) {
  Dataset d;
  d.dims = 2;
  d.classes = spec.classes;
  Rng rng = Rng::stream(seed, "balanced");
  for (int i = 0; i < n; ++i) append_sample(d, rng, static_cast<uint32_t>(i % spec.classes), spec);
  return d;
}

Dataset subset(const Dataset &data, size_t n, uint64_t seed) {
  size_t m = std::min(n, data.size());
  std::vector<size_t> perm(data.size());
  std::iota(perm.begin(), perm.end(), size_t{0});
  Rng rng = Rng::stream(seed, "subset", static_cast<uint64_t>(data.owner + 1));
  Dataset out;
  out.dims = data.dims;
  out.classes = data.classes;
  out.owner = data.owner;
  for (size_t i = 0; i < m; ++i) {
    size_t j = i + rng.below(perm.size() - i);
    std::swap(perm[i], perm[j]);
    const float *r = data.row(perm[i]);
    out.features.insert(out.features.end(), r, r + data.dims);
    out.labels.push_back(data.labels[perm[i]]);
  }
  return out;
}

namespace {

void put_u32(std::ostream &os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char *>(b), 4);
}

uint32_t get_u32(std::istream &is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char *>(b), 4)) throw std::runtime_error("dataset: truncated");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

constexpr uint32_t kDatasetVersion = 1;

}  // namespace

void save_dataset(const Dataset &data, const std::string &path) {
  data.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_dataset: cannot open " + path);
  os.write("HFLD", 4);
  put_u32(os, kDatasetVersion);
  put_u32(os, static_cast<uint32_t>(data.size()));
  put_u32(os, static_cast<uint32_t>(data.dims));
  put_u32(os, static_cast<uint32_t>(data.classes));
  for (float f : data.features) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(os, bits);
  }
  for (uint32_t y : data.labels) put_u32(os, y);
  if (!os) throw std::runtime_error("save_dataset: write failed for " + path);
}

Dataset load_dataset(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_dataset: cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "HFLD", 4) != 0) {
    throw std::runtime_error("load_dataset: bad magic in " + path);
  }
  if (get_u32(is) != kDatasetVersion) throw std::runtime_error("load_dataset: unknown version");
  Dataset d;
  uint32_t n = get_u32(is);
  d.dims = static_cast<int>(get_u32(is));
  d.classes = static_cast<int>(get_u32(is));
  d.features.resize(static_cast<size_t>(n) * d.dims);
  for (float &f : d.features) {
    uint32_t bits = get_u32(is);
    std::memcpy(&f, &bits, 4);
  }
  d.labels.resize(n);
  for (uint32_t &y : d.labels) y = get_u32(is);
  d.validate();
  return d;
}

}  // namespace hflsim
