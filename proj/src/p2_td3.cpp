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
#include "hflsim/p2_td3.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace hflsim {

void FitnessWeights::validate() const {
  for (double l : {lambda1, lambda2, lambda3}) {
    if (l < 0 || l > 1) throw std::invalid_argument("fitness weights must lie in [0,1]");
  }
  if (std::abs(lambda1 + lambda2 + lambda3 - 1.0) > 1e-9) {
    throw std::invalid_argument("fitness weights must sum to 1");
  }
}

std::vector<double> fitness(const FitnessInputs &in, const FitnessWeights &w) {
  size_t n = in.kld.size();
  if (in.dist.size() != n || in.freq.size() != n) {
    throw std::invalid_argument("fitness: input lengths differ");
  }
  std::vector<double> out(n);
  if (n == 0) return out;
  double r_max = *std::max_element(in.kld.begin(), in.kld.end());
  double d_min = *std::min_element(in.dist.begin(), in.dist.end());
  double f_max = *std::max_element(in.freq.begin(), in.freq.end());
  for (size_t i = 0; i < n; ++i) {
    double s_sim = r_max > 0 ? in.kld[i] / r_max : 0.0;
    double s_dis = in.dist[i] > 0 ? d_min / in.dist[i] : 1.0;
    double s_fre = f_max > 0 ? in.freq[i] / f_max : 0.0;
    out[i] = std::clamp(w.lambda1 * s_sim + w.lambda2 * s_dis + w.lambda3 * s_fre, 0.0, 1.0);
  }
  return out;
}

std::vector<int> select_by_threshold(const std::vector<double> &alphas, double beta) {
  std::vector<int> out;
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] >= beta) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<UavSelection> resolve_overlaps(const std::vector<UavSelection> &selections) {
  // device -> (alpha, uav id) of the current winner
  std::map<int, std::pair<double, int>> best;
  for (const auto &sel : selections) {
    for (size_t i = 0; i < sel.devices.size(); ++i) {
      int dev = sel.devices[i];
      double a = sel.alpha[i];
      auto it = best.find(dev);
      if (it == best.end() || a > it->second.first ||
          (a == it->second.first && sel.uav < it->second.second)) {
        best[dev] = {a, sel.uav};
      }
    }
  }
  std::vector<UavSelection> out;
  for (const auto &sel : selections) {
    UavSelection kept;
    kept.uav = sel.uav;
    for (size_t i = 0; i < sel.devices.size(); ++i) {
      if (best[sel.devices[i]].second == sel.uav) {
        kept.devices.push_back(sel.devices[i]);
        kept.alpha.push_back(sel.alpha[i]);
      }
    }
    out.push_back(std::move(kept));
  }
  return out;
}

double shaped_reward(double w1, double w2, double lambda6, double lambda7, double alpha_pen,
                     double t_dev, double t_max) {
  double v = std::max(t_dev - t_max, 0.0);
  return lambda6 * w1 + lambda7 * w2 - alpha_pen * v * v;
}

double update_penalty(double alpha_tilde, long t, int d, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("update_penalty: increment must be positive");
  return (d > 0 && t % d == 0) ? alpha_tilde + delta : alpha_tilde;
}

void Td3Config::validate() const {
  if (!(tau > 0 && tau <= 1) || policy_delay < 1 || gamma < 0 || gamma > 1 || noise_sigma < 0 ||
      noise_clip < 0 || buffer_capacity < 1 || batch_size < 1 || !(delta_alpha > 0) ||
      hidden < 1 || t_step < 1) {
    throw std::invalid_argument("TD3 config out of range");
  }
}

void ReplayBuffer::push(const Transition &t) {
  if (data_.size() < capacity_) {
    data_.push_back(t);
    return;
  }
  data_[head_] = t;
  head_ = (head_ + 1) % capacity_;
}

const Transition &ReplayBuffer::at(size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
  return data_[(head_ + i) % data_.size()];
}

std::vector<Transition> ReplayBuffer::sample(size_t n, Rng &rng) const {
  std::vector<Transition> out;
  if (data_.empty()) return out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(data_[rng.below(data_.size())]);
  return out;
}

Td3Agent::Td3Agent(const Td3Config &cfg, uint64_t seed)
    : cfg_(cfg),
      buffer_(cfg.buffer_capacity),
      noise_rng_(Rng::stream(seed, "td3-noise")),
      replay_rng_(Rng::stream(seed, "td3-replay")),
      alpha_tilde_(cfg.alpha0) {
  cfg_.validate();
  int h = cfg_.hidden;
  actor_ = Mlp({2, h, h, 1}, Activation::kTanh, Activation::kSigmoid,
               Rng::stream(seed, "td3-actor").next_u64());
  critic1_ = Mlp({3, h, h, 1}, Activation::kTanh, Activation::kIdentity,
                 Rng::stream(seed, "td3-critic1").next_u64());
  critic2_ = Mlp({3, h, h, 1}, Activation::kTanh, Activation::kIdentity,
                 Rng::stream(seed, "td3-critic2").next_u64());
  actor_t_ = actor_;
  critic1_t_ = critic1_;
  critic2_t_ = critic2_;
  actor_opt_.lr = cfg_.actor_lr;
  critic1_opt_.lr = cfg_.critic_lr;
  critic2_opt_.lr = cfg_.critic_lr;
}

double Td3Agent::policy(const AgentState &s) const { return actor_.forward(s.data())[0]; }

double Td3Agent::target_policy(const AgentState &s) const {
  return actor_t_.forward(s.data())[0];
}

double Td3Agent::act_with_noise(double mu, double noise, double clip) {
  return std::clamp(mu + std::clamp(noise, -clip, clip), 0.0, 1.0);
}

double Td3Agent::act(const AgentState &s) {
  double noise = cfg_.noise_sigma * noise_rng_.normal();
  return act_with_noise(policy(s), noise, cfg_.noise_clip);
}

double Td3Agent::explore(const AgentState &s) {
  if (seen_ < cfg_.warmup) return noise_rng_.uniform();
  return act(s);
}

namespace {

double q_eval(const Mlp &critic, const AgentState &s, double a) {
  double in[3] = {s[0], s[1], a};
  return critic.forward(in)[0];
}

}  // namespace

double Td3Agent::q1(const AgentState &s, double a) const { return q_eval(critic1_, s, a); }
double Td3Agent::q2(const AgentState &s, double a) const { return q_eval(critic2_, s, a); }
double Td3Agent::q1_target(const AgentState &s, double a) const {
  return q_eval(critic1_t_, s, a);
}
double Td3Agent::q2_target(const AgentState &s, double a) const {
  return q_eval(critic2_t_, s, a);
}

double Td3Agent::target_value(double r, double gamma, double q1_next, double q2_next,
                              bool terminal) {
  if (terminal) return r;
  return r + gamma * std::min(q1_next, q2_next);
}

double Td3Agent::target_noise() {
  double n = cfg_.noise_sigma * noise_rng_.normal();
  return std::clamp(n, -cfg_.noise_clip, cfg_.noise_clip);
}

std::vector<double> Td3Agent::critic_target(const std::vector<Transition> &batch) {
  if (batch.empty()) throw std::invalid_argument("critic_target: empty batch");
  std::vector<double> z;
  z.reserve(batch.size());
  for (const auto &t : batch) {
    double a_next = std::clamp(target_policy(t.s_next) + target_noise(), 0.0, 1.0);
    double q1n = t.terminal ? 0.0 : q1_target(t.s_next, a_next);
    double q2n = t.terminal ? 0.0 : q2_target(t.s_next, a_next);
    z.push_back(target_value(t.r, cfg_.gamma, q1n, q2n, t.terminal));
  }
  return z;
}

double Td3Agent::critic_loss(const Mlp &critic, const std::vector<Transition> &batch,
                             const std::vector<double> &targets, std::vector<double> *grad) {
  if (grad) grad->assign(critic.params().size(), 0.0);
  double loss = 0.0;
  double inv = 1.0 / static_cast<double>(batch.size());
  Mlp::Tape tape;
  for (size_t i = 0; i < batch.size(); ++i) {
    double in[3] = {batch[i].s[0], batch[i].s[1], batch[i].a};
    double q = critic.forward(in, grad ? &tape : nullptr)[0];
    double err = q - targets[i];
    loss += err * err * inv;
    if (grad) {
      double d = 2.0 * err * inv;
      critic.backward(tape, &d, grad, nullptr);
    }
  }
  return loss;
}

double Td3Agent::actor_objective(const std::vector<Transition> &batch,
                                 std::vector<double> *grad) const {
  if (grad) grad->assign(actor_.params().size(), 0.0);
  double inv = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  Mlp::Tape atape;
  Mlp::Tape ctape;
  std::vector<double> dq_din;
  for (const auto &t : batch) {
    double mu = actor_.forward(t.s.data(), grad ? &atape : nullptr)[0];
    double in[3] = {t.s[0], t.s[1], mu};
    total += critic1_.forward(in, grad ? &ctape : nullptr)[0] * inv;
    if (grad) {
      double one = 1.0;
      critic1_.backward(ctape, &one, nullptr, &dq_din);
      double da = dq_din[2] * inv;
      actor_.backward(atape, &da, grad, nullptr);
    }
  }
  return total;
}

double Td3Agent::update_critics(const std::vector<Transition> &batch,
                                const std::vector<double> &targets) {
  std::vector<double> g1;
  std::vector<double> g2;
  double l1 = critic_loss(critic1_, batch, targets, &g1);
  double l2 = critic_loss(critic2_, batch, targets, &g2);
  critic1_opt_.step(critic1_.params(), g1);
  critic2_opt_.step(critic2_.params(), g2);
  ++critic_updates_;
  return 0.5 * (l1 + l2);
}

double Td3Agent::update_critics(const std::vector<Transition> &batch) {
  return update_critics(batch, critic_target(batch));
}

void Td3Agent::update_actor(const std::vector<Transition> &batch) {
  std::vector<double> g;
  actor_objective(batch, &g);
  actor_opt_.step(actor_.params(), g, /*ascend=*/true);
  ++actor_updates_;
}

void Td3Agent::soft_update(double tau) {
  if (!(tau > 0 && tau <= 1)) throw std::invalid_argument("soft_update: tau outside (0,1]");
  auto blend = [tau](const Mlp &src, Mlp &dst) {
    auto &d = dst.params();
    const auto &s = src.params();
    for (size_t i = 0; i < d.size(); ++i) d[i] = tau * s[i] + (1.0 - tau) * d[i];
  };
  blend(actor_, actor_t_);
  blend(critic1_, critic1_t_);
  blend(critic2_, critic2_t_);
}

void Td3Agent::store(const Transition &t) {
  Transition c = t;
  c.a = std::clamp(c.a, 0.0, 1.0);
  buffer_.push(c);
  ++seen_;
}

bool Td3Agent::train_step() {
  if (buffer_.size() < cfg_.batch_size) return false;
  std::vector<Transition> batch = buffer_.sample(cfg_.batch_size, replay_rng_);
  update_critics(batch);
  long t = critic_updates_;
  if (t % cfg_.policy_delay == 0) {
    update_actor(batch);
    alpha_tilde_ = update_penalty(alpha_tilde_, t, cfg_.policy_delay, cfg_.delta_alpha);
    soft_update(cfg_.tau);
  }
  return true;
}

namespace {

constexpr uint32_t kCheckpointVersion = 1;

void put_u64(std::ostream &os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char *>(b), 8);
}

uint64_t get_u64(std::istream &is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char *>(b), 8)) throw std::runtime_error("checkpoint: truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void Td3Agent::save(const std::string &path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
  os.write("HTD3", 4);
  put_u64(os, kCheckpointVersion);
  const Mlp *nets[6] = {&actor_, &actor_t_, &critic1_, &critic2_, &critic1_t_, &critic2_t_};
  put_u64(os, 6);
  for (const Mlp *n : nets) {
    put_u64(os, n->params().size());
    for (double v : n->params()) {
      uint64_t bits;
      std::memcpy(&bits, &v, 8);
      put_u64(os, bits);
    }
  }
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);

  nlohmann::json j;
  j["format_version"] = kCheckpointVersion;
  j["gamma"] = cfg_.gamma;
  j["tau"] = cfg_.tau;
  j["policy_delay"] = cfg_.policy_delay;
  j["noise_sigma"] = cfg_.noise_sigma;
  j["noise_clip"] = cfg_.noise_clip;
  j["buffer_capacity"] = cfg_.buffer_capacity;
  j["batch_size"] = cfg_.batch_size;
  j["alpha0"] = cfg_.alpha0;
  j["delta_alpha"] = cfg_.delta_alpha;
  j["hidden"] = cfg_.hidden;
  j["actor_lr"] = cfg_.actor_lr;
  j["critic_lr"] = cfg_.critic_lr;
  j["warmup"] = cfg_.warmup;
  j["t_step"] = cfg_.t_step;
  j["lambda6"] = cfg_.lambda6;
  j["lambda7"] = cfg_.lambda7;
  j["alpha_tilde"] = alpha_tilde_;
  j["critic_updates"] = critic_updates_;
  j["actor_updates"] = actor_updates_;
  j["transitions_seen"] = seen_;
  std::ofstream js(path + ".json");
  js << j.dump(2) << "\n";
  if (!js) throw std::runtime_error("checkpoint: cannot write sidecar for " + path);
}

void Td3Agent::load(const std::string &path) {
  std::ifstream js(path + ".json");
  if (!js) throw std::runtime_error("checkpoint: missing sidecar for " + path);
  nlohmann::json j = nlohmann::json::parse(js);
  if (j.at("hidden").get<int>() != cfg_.hidden) {
    throw std::runtime_error("checkpoint: hidden width differs from the agent");
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "HTD3", 4) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  if (get_u64(is) != kCheckpointVersion) throw std::runtime_error("checkpoint: unknown version");
  if (get_u64(is) != 6) throw std::runtime_error("checkpoint: expected six networks");
  Mlp *nets[6] = {&actor_, &actor_t_, &critic1_, &critic2_, &critic1_t_, &critic2_t_};
  for (Mlp *n : nets) {
    if (get_u64(is) != n->params().size()) throw std::runtime_error("checkpoint: size mismatch");
    for (double &v : n->params()) {
      uint64_t bits = get_u64(is);
      std::memcpy(&v, &bits, 8);
    }
  }
  alpha_tilde_ = j.at("alpha_tilde").get<double>();
  critic_updates_ = j.at("critic_updates").get<long>();
  actor_updates_ = j.at("actor_updates").get<long>();
  seen_ = j.at("transitions_seen").get<size_t>();
}

EpisodeResult episode_step(Td3Agent &agent, const AgentState &s, const CandidateEnv &env,
                           int t_step, bool terminal) {
  if (t_step < 1) throw std::invalid_argument("episode_step: t_step must be >= 1");
  EpisodeResult res;
  res.best_reward = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < t_step; ++t) {
    double a = agent.explore(s);
    auto [r, s_next] = env(a);
    Transition tr{s, a, r, s_next, terminal};
    agent.store(tr);
    agent.train_step();
    res.transitions.push_back(tr);
    if (r > res.best_reward) {
      res.best_reward = r;
      res.chosen = a;
    }
  }
  return res;
}

}  // namespace hflsim
