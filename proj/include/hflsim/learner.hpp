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
#ifndef HFLSIM_LEARNER_HPP_
#define HFLSIM_LEARNER_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hflsim {

struct Dataset {
  int dims = 2;
  int classes = 10;
  int owner = -1;
  std::vector<float> features;  // row-major, size() * dims
  std::vector<uint32_t> labels;

  size_t size() const { return labels.size(); }
  const float *row(size_t i) const { return features.data() + i * static_cast<size_t>(dims); }
  void validate() const;
};

struct ModelShape {
  int dims = 2;
  int hidden = 0;  // 0 = multinomial logistic regression
  int classes = 10;

  size_t param_count() const;
  bool operator==(const ModelShape &o) const = default;
};

struct ModelParams {
  ModelShape shape;
  std::vector<double> w;
  // Version tag: global round, intermediate round, local step.
  int g = 0;
  int k = 0;
  int h = 0;

  void validate() const;
};

struct TrainConfig {
  double eta = 0.001;
  int h = 1;
  double batch_fraction = 1.0;
  uint64_t seed = 0;

  void validate() const;
};

struct Metrics {
  double loss = 0.0;
  double accuracy = 0.0;
};

enum class NoniidScheme { kA, kB };

// Geometry of the synthetic class clusters.
struct SynthSpec {
  int classes = 10;
  double center_radius = 4.0;
  double cluster_std = 0.5;
};

ModelParams init_model(const ModelShape &shape, uint64_t seed);

// Raw outputs (pre-softmax) for one sample.
void forward(const ModelParams &model, const float *x, double *logits);
void softmax_inplace(double *v, int n);

// Mean cross-entropy over `indices`; accumulates the gradient into `grad` when non-null.
double loss_and_grad(const ModelParams &model, const Dataset &data,
                     const std::vector<size_t> &indices, std::vector<double> *grad);

ModelParams local_sgd(const ModelParams &model, const Dataset &data, const TrainConfig &cfg);

ModelParams fedavg(const std::vector<const ModelParams *> &models,
                   const std::vector<double> &weights);
ModelParams fedavg(const std::vector<ModelParams> &models, const std::vector<double> &weights);

double l2_distance(const ModelParams &a, const ModelParams &b);
bool converged(const ModelParams &w_g, const ModelParams &w_prev, double delta);

// Sum over probe samples of KL(softmax(uav) || softmax(dev)), natural log.
double kld_score(const ModelParams &uav_model, const ModelParams &dev_model, const Dataset &probe);

Metrics eval_metrics(const ModelParams &model, const Dataset &data);
// (loss decrease, accuracy increase)
std::pair<double, double> delta_metrics(const Metrics &prev, const Metrics &cur);

ModelParams train_personalized(const Dataset &seed_data, const ModelParams &init,
                               const TrainConfig &cfg);

std::vector<Dataset> synth_noniid(int n_devices, NoniidScheme scheme, int samples_per_device,
                                  uint64_t seed, const SynthSpec &spec = {});
// Balanced set: n samples spread evenly over the classes.
Dataset synth_balanced(int n, uint64_t seed, const SynthSpec &spec = {});
// Deterministic subset of min(n, |data|) rows.
Dataset subset(const Dataset &data, size_t n, uint64_t seed);

void save_dataset(const Dataset &data, const std::string &path);
Dataset load_dataset(const std::string &path);

}  // namespace hflsim

#endif  // HFLSIM_LEARNER_HPP_
