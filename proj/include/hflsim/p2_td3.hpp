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
#ifndef HFLSIM_P2_TD3_HPP_
#define HFLSIM_P2_TD3_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hflsim/mlp.hpp"
#include "hflsim/rng.hpp"

namespace hflsim {

struct FitnessInputs {
  std::vector<double> kld;
  std::vector<double> dist;
  std::vector<double> freq;
};

struct FitnessWeights {
  double lambda1 = 0.6;
  double lambda2 = 0.2;
  double lambda3 = 0.2;

  void validate() const;
};

// Blend of normalised diversity (R/R^Max), proximity (d^Min/d) and speed (f/f^Max).
std::vector<double> fitness(const FitnessInputs &inputs, const FitnessWeights &weights);

// Indices i with alphas[i] >= beta.
std::vector<int> select_by_threshold(const std::vector<double> &alphas, double beta);

struct UavSelection {
  int uav = -1;
  std::vector<int> devices;   // device ids
  std::vector<double> alpha;  // fitness of each listed device for this UAV
};

// Each device keeps only the UAV with the largest fitness; ties go to the lowest UAV id.
std::vector<UavSelection> resolve_overlaps(const std::vector<UavSelection> &selections);

double shaped_reward(double w1, double w2, double lambda6, double lambda7, double alpha_pen,
                     double t_dev, double t_max);

double update_penalty(double alpha_tilde, long t, int d, double delta);

using AgentState = std::array<double, 2>;  // (loss, accuracy)

struct Transition {
  AgentState s{};
  double a = 0.0;
  double r = 0.0;
  AgentState s_next{};
  bool terminal = false;  // bandit-style episodes bootstrap nothing
};

struct Td3Config {
  double gamma = 0.99;
  double tau = 0.005;
  int policy_delay = 2;
  double noise_sigma = 0.1;
  double noise_clip = 0.25;
  size_t buffer_capacity = 10000;
  size_t batch_size = 64;
  double alpha0 = 1.0;
  double delta_alpha = 0.5;
  int hidden = 64;
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  size_t warmup = 200;
  int t_step = 4;
  double lambda6 = 0.5;
  double lambda7 = 0.5;

  void validate() const;
};

// FIFO ring buffer.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity = 10000) : capacity_(capacity) {}
  void push(const Transition &t);
  size_t size() const { return data_.size(); }
  size_t capacity() const { return capacity_; }
  // i-th oldest stored transition.
  const Transition &at(size_t i) const;
  std::vector<Transition> sample(size_t n, Rng &rng) const;

 private:
  size_t capacity_;
  size_t head_ = 0;  // index of the oldest entry once full
  std::vector<Transition> data_;
};

class Td3Agent {
 public:
  Td3Agent(const Td3Config &cfg, uint64_t seed);

  const Td3Config &config() const { return cfg_; }
  double policy(const AgentState &s) const;
  double target_policy(const AgentState &s) const;
  // Policy output plus clipped Gaussian noise, clamped to [0,1].
  double act(const AgentState &s);
  // Uniform random threshold while the warmup budget lasts, else act().
  double explore(const AgentState &s);
  static double act_with_noise(double mu, double noise, double clip);

  double q1(const AgentState &s, double a) const;
  double q2(const AgentState &s, double a) const;
  double q1_target(const AgentState &s, double a) const;
  double q2_target(const AgentState &s, double a) const;

  static double target_value(double r, double gamma, double q1_next, double q2_next,
                             bool terminal);
  std::vector<double> critic_target(const std::vector<Transition> &batch);

  // Mean squared TD error of one critic and its parameter gradient.
  static double critic_loss(const Mlp &critic, const std::vector<Transition> &batch,
                            const std::vector<double> &targets, std::vector<double> *grad);
  // Mean Q1(s, mu(s)) over the batch and its gradient in the actor parameters.
  double actor_objective(const std::vector<Transition> &batch, std::vector<double> *grad) const;

  double update_critics(const std::vector<Transition> &batch);
  double update_critics(const std::vector<Transition> &batch,
                        const std::vector<double> &targets);
  void update_actor(const std::vector<Transition> &batch);
  void soft_update(double tau);

  void store(const Transition &t);
  // One replay step: critics, then (every policy_delay) actor, penalty and targets.
  bool train_step();

  double alpha_tilde() const { return alpha_tilde_; }
  long critic_updates() const { return critic_updates_; }
  long actor_updates() const { return actor_updates_; }
  size_t transitions_seen() const { return seen_; }
  const ReplayBuffer &buffer() const { return buffer_; }

  Mlp &actor() { return actor_; }
  Mlp &actor_target() { return actor_t_; }
  Mlp &critic1() { return critic1_; }
  Mlp &critic2() { return critic2_; }
  Mlp &critic1_target() { return critic1_t_; }
  Mlp &critic2_target() { return critic2_t_; }

  void save(const std::string &path) const;  // writes path and path + ".json"
  void load(const std::string &path);

 private:
  double target_noise();

  Td3Config cfg_;
  Mlp actor_, actor_t_, critic1_, critic2_, critic1_t_, critic2_t_;
  Adam actor_opt_, critic1_opt_, critic2_opt_;
  ReplayBuffer buffer_;
  Rng noise_rng_;
  Rng replay_rng_;
  double alpha_tilde_;
  long critic_updates_ = 0;
  long actor_updates_ = 0;
  size_t seen_ = 0;
};

// Environment callback: candidate threshold -> (shaped reward, next state).
using CandidateEnv = std::function<std::pair<double, AgentState>(double)>;

struct EpisodeResult {
  double chosen = 0.0;
  double best_reward = 0.0;
  std::vector<Transition> transitions;
};

// Tries t_step candidate thresholds, stores and trains on each, returns the best-reward one.
EpisodeResult episode_step(Td3Agent &agent, const AgentState &s, const CandidateEnv &env,
                           int t_step, bool terminal = false);

}  // namespace hflsim

#endif  // HFLSIM_P2_TD3_HPP_
