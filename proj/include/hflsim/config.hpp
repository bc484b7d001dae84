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
#ifndef HFLSIM_CONFIG_HPP_
#define HFLSIM_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hflsim/p1_alm.hpp"
#include "hflsim/p2_td3.hpp"
#include "hflsim/p3_greedy.hpp"

namespace hflsim {

// Configuration failure carrying the offending key path (e.g. "p2.lambda1").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string &path, const std::string &what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

struct NetConfig {
  double field_size = 20000.0;
  int n_uavs = 5;
  int n_devices = 150;
  double radius = 5000.0;
  double altitude = 150.0;
  double xi = 0.3;
  double alpha_d2u = 3.0;
  double alpha_u2d = 3.0;
  double alpha_u2u = 2.0;
  double n0_dbm_per_hz = -174.0;
  std::vector<std::vector<double>> uav_positions;  // optional [[x, y], ...]
};

struct DeviceConfig {
  double f_min = 1e9;
  double f_max = 10e9;
  double cycles_per_bit_min = 30.0;
  double cycles_per_bit_max = 100.0;
  double bits_per_sample = 6272.0;  // 28x28 8-bit sample
  double theta = 1e-28;
  double t_fix = 0.05;
  double p_d2u_min = 0.2;
  double p_d2u_max = 0.8;
  double model_bits = 698880.0;  // 21,840 float32 parameters
};

struct UavConfig {
  double p_hover = 100.0;
  double p_move = 160.0;
  double speed = 16.0;
  double p_u2u_min = 0.5;
  double p_u2u_max = 1.0;
  double p_u2d_min = 0.3;
  double p_u2d_max = 1.2;
  double bandwidth_min = 20e6;
  double bandwidth_max = 100e6;
  double b_u2u = 2e6;
  double battery = 2e5;
  std::vector<double> batteries;  // optional per-UAV override
};

struct LearnerConfig {
  std::string scheme = "A";
  int samples_per_device = 100;
  int hidden = 0;
  double eta = 0.001;
  double phi = 0.2;
  int test_samples = 1000;
  int probe_samples = 16;
  double center_radius = 40.0;
  double cluster_std = 5.0;
  int personal_samples = 32;
  int personal_steps = 20;
};

struct P2Config {
  double lambda1 = 0.6;
  double lambda2 = 0.2;
  double lambda3 = 0.2;
  Td3Config td3;
  int pretrain = 200;
  double t_max = 0.0;  // 0 = use the dwell bound
  bool terminal = false;
};

struct OrchestratorConfig {
  std::string selection = "adaptive";  // adaptive|random|distance-only|similarity-only|fixed
  double fixed_beta = 0.55;
  std::string redeploy = "greedy";  // greedy|direct-drop
  double lambda4 = 0.5;
  double lambda5 = 0.5;
  double delta = 1e-3;
  int max_rounds = 50;
  int k_max = 10;
  int fixed_point_cap = 5;
  double t_stay = 0.0;  // 0 = previous round's duration (unbounded in round 1)
  double random_prob = 0.5;
  double target_accuracy = 0.85;
};

struct RunConfig {
  uint64_t seed = 1;
  std::string scenario;
  std::string out_dir = "out";
  NetConfig net;
  DeviceConfig device;
  UavConfig uav;
  LearnerConfig learner;
  P1Config p1;
  P2Config p2;
  SearchConfig p3;
  OrchestratorConfig orchestrator;

  // Throws ConfigError naming the first violated field.
  void validate() const;
};

// JSON text merged over defaults. Empty text means defaults; unknown keys are rejected.
RunConfig parse_config_text(const std::string &text);
RunConfig parse_config(const std::string &path);
// Applies a JSON object of overrides (same schema) on top of `base`.
RunConfig apply_overrides(const RunConfig &base, const std::string &json_text);

// Sorted-key compact JSON of the full tree; parse(dump(c)) == c.
std::string canonical_dump(const RunConfig &cfg);
// FNV-1a 64 of the canonical dump, 16 hex digits.
std::string config_hash(const RunConfig &cfg);

}  // namespace hflsim

#endif  // HFLSIM_CONFIG_HPP_
