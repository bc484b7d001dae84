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
#include "hflsim/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hflsim/parallel.hpp"
#include "hflsim/rng.hpp"

namespace hflsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool uses_agent(const std::string &selection) {
  return selection == "adaptive" || selection == "distance-only" ||
         selection == "similarity-only";
}

FitnessWeights weights_for(const RunConfig &cfg) {
  const auto &sel = cfg.orchestrator.selection;
  if (sel == "distance-only") return {0.0, 1.0, 0.0};
  if (sel == "similarity-only") return {1.0, 0.0, 0.0};
  return {cfg.p2.lambda1, cfg.p2.lambda2, cfg.p2.lambda3};
}

ModelShape model_shape(const RunConfig &cfg) {
  return ModelShape{2, cfg.learner.hidden, 10};
}

SynthSpec synth_spec(const RunConfig &cfg) {
  return SynthSpec{10, cfg.learner.center_radius, cfg.learner.cluster_std};
}

uint64_t sub_seed(uint64_t seed, const char *name, uint64_t a = 0, uint64_t b = 0,
                  uint64_t c = 0) {
  return Rng::stream(seed, name, a, b, c).next_u64();
}

// Threshold rule with the empty-selection fallback (highest fitness, lowest index on ties).
std::vector<int> threshold_pick(const std::vector<double> &alpha, double beta) {
  std::vector<int> idx = select_by_threshold(alpha, beta);
  if (idx.empty() && !alpha.empty()) {
    idx.push_back(static_cast<int>(std::max_element(alpha.begin(), alpha.end()) - alpha.begin()));
  }
  return idx;
}

UavSelection make_selection(int m, const RoundContext &ctx, const std::vector<int> &idx) {
  UavSelection s;
  s.uav = m;
  for (int i : idx) {
    s.devices.push_back(ctx.covered[m][i]);
    s.alpha.push_back(ctx.alpha[m][i]);
  }
  return s;
}

ModelParams average_updates(const RoundContext &ctx, const NetworkState &st,
                            const std::vector<int> &devices) {
  std::vector<const ModelParams *> models;
  std::vector<double> w;
  for (int n : devices) {
    models.push_back(&ctx.probe_update[n]);
    w.push_back(static_cast<double>(st.devices[n].data.size()));
  }
  return fedavg(models, w);
}

double device_distance(const NetworkState &st, int n, int m) {
  return distance(st.devices[n].pos, st.uavs[m].pos);
}

// Worst per-device delay of one edge iteration with H local steps and the budgets split evenly.
double uniform_split_tdev(const NetworkState &st, int m, const std::vector<int> &devices, int h) {
  if (devices.empty()) return 0.0;
  const UavProfile &u = st.uavs[m].profile;
  double share = 1.0 / static_cast<double>(devices.size());
  double worst = 0.0;
  for (int n : devices) {
    DeviceCost c = device_round_costs(st.devices[n].profile, h, u.b_d2u_total * share,
                                      u.b_u2d_total * share, device_distance(st, n, m),
                                      st.channel, u);
    worst = std::max(worst, c.t_dev);
  }
  return worst;
}

// Candidate-threshold environment of UAV m: one-step surrogate of the edge iteration.
CandidateEnv make_env(const NetworkState &st, const RunConfig &cfg, const RoundContext &ctx,
                      int m, const AgentState &s, double alpha_pen) {
  return [&st, &cfg, &ctx, m, s, alpha_pen](double beta) {
    std::vector<int> idx = threshold_pick(ctx.alpha[m], beta);
    std::vector<int> devices;
    for (int i : idx) devices.push_back(ctx.covered[m][i]);
    Metrics next = eval_metrics(average_updates(ctx, st, devices), st.test);
    auto [w1, w2] = delta_metrics(Metrics{s[0], s[1]}, next);
    double t_max = cfg.p2.t_max > 0 ? cfg.p2.t_max : st.t_stay;
    double t_dev = uniform_split_tdev(st, m, devices, 1);
    double r = shaped_reward(w1, w2, cfg.p2.td3.lambda6, cfg.p2.td3.lambda7, alpha_pen, t_dev,
                             std::isfinite(t_max) ? t_max : t_dev);
    return std::make_pair(r, AgentState{next.loss, next.accuracy});
  };
}

}  // namespace

std::vector<int> NetworkState::active_ids() const {
  std::vector<int> out;
  for (const auto &u : uavs) {
    if (u.active) out.push_back(u.id);
  }
  return out;
}

std::vector<UavPos> NetworkState::uav_positions() const {
  std::vector<UavPos> out;
  for (const auto &u : uavs) out.push_back(u.pos);
  return out;
}

std::vector<DevicePos> NetworkState::device_positions() const {
  std::vector<DevicePos> out;
  for (const auto &d : devices) out.push_back(d.pos);
  return out;
}

NetworkState init_state(const RunConfig &cfg) {
  cfg.validate();
  NetworkState st;
  const auto &nc = cfg.net;
  st.channel.alpha_d2u = nc.alpha_d2u;
  st.channel.alpha_u2d = nc.alpha_u2d;
  st.channel.alpha_u2u = nc.alpha_u2u;
  st.channel.n0 = dbm_per_hz_to_watt(nc.n0_dbm_per_hz);

  std::vector<UavPos> pos;
  if (nc.uav_positions.empty()) {
    pos = grid_uav_positions(nc.n_uavs, nc.field_size, nc.altitude);
  } else {
    for (const auto &p : nc.uav_positions) pos.push_back(UavPos{p[0], p[1], nc.altitude});
  }
  const auto &uc = cfg.uav;
  for (int m = 0; m < nc.n_uavs; ++m) {
    UavState u;
    u.id = m;
    u.pos = pos[m];
    Rng r = Rng::stream(cfg.seed, "uav-profile", m);
    u.profile.p_hover = uc.p_hover;
    u.profile.p_move = uc.p_move;
    u.profile.speed = uc.speed;
    u.profile.p_u2u = r.uniform(uc.p_u2u_min, uc.p_u2u_max);
    u.profile.p_u2d = r.uniform(uc.p_u2d_min, uc.p_u2d_max);
    u.profile.b_d2u_total = r.uniform(uc.bandwidth_min, uc.bandwidth_max);
    u.profile.b_u2d_total = r.uniform(uc.bandwidth_min, uc.bandwidth_max);
    u.profile.b_u2u = uc.b_u2u;
    u.profile.battery = uc.batteries.empty() ? uc.battery : uc.batteries[m];
    u.profile.i_u2d = cfg.device.model_bits;
    u.profile.i_u2u = cfg.device.model_bits;
    u.battery = u.profile.battery;
    st.uavs.push_back(std::move(u));
  }

  SynthSpec spec = synth_spec(cfg);
  NoniidScheme scheme = cfg.learner.scheme == "A" ? NoniidScheme::kA : NoniidScheme::kB;
  std::vector<Dataset> data = synth_noniid(nc.n_devices, scheme, cfg.learner.samples_per_device,
                                           sub_seed(cfg.seed, "device-data"), spec);
  std::vector<DevicePos> dpos =
      place_devices(nc.n_devices, pos, nc.radius, nc.field_size, cfg.seed);
  const auto &dc = cfg.device;
  for (int n = 0; n < nc.n_devices; ++n) {
    DeviceState d;
    d.id = n;
    d.pos = dpos[n];
    Rng r = Rng::stream(cfg.seed, "device-profile", n);
    d.profile.f = r.uniform(dc.f_min, dc.f_max);
    d.profile.c = r.uniform(dc.cycles_per_bit_min, dc.cycles_per_bit_max) * dc.bits_per_sample;
    d.profile.p_d2u = r.uniform(dc.p_d2u_min, dc.p_d2u_max);
    d.profile.theta = dc.theta;
    d.profile.t_fix = dc.t_fix;
    d.profile.phi = cfg.learner.phi;
    d.profile.i_d2u = dc.model_bits;
    d.data = std::move(data[n]);
    d.data.owner = n;
    d.profile.dataset_size = static_cast<double>(d.data.size());
    d.probe = subset(d.data, static_cast<size_t>(cfg.learner.probe_samples),
                     sub_seed(cfg.seed, "probe"));
    st.devices.push_back(std::move(d));
  }

  st.test = synth_balanced(cfg.learner.test_samples, sub_seed(cfg.seed, "test-data"), spec);
  st.global = init_model(model_shape(cfg), sub_seed(cfg.seed, "global-init"));
  st.global_metrics = eval_metrics(st.global, st.test);

  std::vector<Dataset> seed_data =
      synth_noniid(nc.n_uavs, NoniidScheme::kB, cfg.learner.personal_samples,
                   sub_seed(cfg.seed, "uav-seed-data"), spec);
  for (auto &u : st.uavs) {
    TrainConfig tc{cfg.learner.eta, cfg.learner.personal_steps, 1.0,
                   sub_seed(cfg.seed, "personal", u.id)};
    u.personal = train_personalized(seed_data[u.id], st.global, tc);
    u.rl_state = {st.global_metrics.loss, st.global_metrics.accuracy};
  }

  if (uses_agent(cfg.orchestrator.selection)) {
    for (int m = 0; m < nc.n_uavs; ++m) {
      st.agents.emplace_back(cfg.p2.td3, sub_seed(cfg.seed, "td3", m));
    }
  }
  st.aggregator = 0;
  st.t_stay = cfg.orchestrator.t_stay > 0 ? cfg.orchestrator.t_stay : kInf;
  return st;
}

RoundContext build_context(const NetworkState &st, const RunConfig &cfg, int g) {
  RoundContext ctx;
  ctx.g = g;
  ctx.active = st.active_ids();
  size_t n_uav = st.uavs.size();
  size_t n_dev = st.devices.size();
  ctx.covered.assign(n_uav, {});
  ctx.alpha.assign(n_uav, {});
  ctx.dist.assign(n_uav, {});
  ctx.probe_update.assign(n_dev, ModelParams{});
  ctx.has_update.assign(n_dev, 0);
  std::vector<DevicePos> dpos = st.device_positions();
  for (int m : ctx.active) {
    ctx.covered[m] = coverage_set(st.uavs[m].pos, dpos, cfg.net.radius);
    for (int n : ctx.covered[m]) ctx.has_update[n] = 1;
  }
  std::vector<int> todo;
  for (size_t n = 0; n < n_dev; ++n) {
    if (ctx.has_update[n]) todo.push_back(static_cast<int>(n));
  }
  parallel_for(todo.size(), [&](size_t i) {
    int n = todo[i];
    TrainConfig tc{cfg.learner.eta, 1, cfg.learner.phi,
                   sub_seed(cfg.seed, "probe-update", static_cast<uint64_t>(n),
                            static_cast<uint64_t>(g))};
    ctx.probe_update[n] = local_sgd(st.global, st.devices[n].data, tc);
  });
  FitnessWeights w = weights_for(cfg);
  for (int m : ctx.active) {
    FitnessInputs in;
    for (int n : ctx.covered[m]) {
      in.kld.push_back(kld_score(st.uavs[m].personal, ctx.probe_update[n], st.devices[n].probe));
      double d = device_distance(st, n, m);
      in.dist.push_back(d);
      in.freq.push_back(st.devices[n].profile.f);
    }
    ctx.dist[m] = in.dist;
    ctx.alpha[m] = fitness(in, w);
  }
  return ctx;
}

void pretrain_agents(NetworkState &st, const RunConfig &cfg) {
  if (st.agents.empty() || st.pretrained) return;
  RoundContext ctx = build_context(st, cfg, 0);
  for (int m : ctx.active) {
    if (ctx.covered[m].empty()) continue;
    Td3Agent &agent = st.agents[m];
    AgentState s = st.uavs[m].rl_state;
    while (agent.transitions_seen() < static_cast<size_t>(cfg.p2.pretrain)) {
      CandidateEnv env = make_env(st, cfg, ctx, m, s, agent.alpha_tilde());
      double a = agent.explore(s);
      auto [r, s_next] = env(a);
      agent.store(Transition{s, a, r, s_next, cfg.p2.terminal});
      agent.train_step();
    }
  }
  st.pretrained = true;
}

FixedPointResult p1_p2_fixed_point(const NetworkState &st, const RunConfig &cfg,
                                   const RoundContext &ctx,
                                   const std::vector<UavSelection> &initial) {
  FixedPointResult res;
  res.selections = initial;
  const auto &oc = cfg.orchestrator;
  for (int pass = 0; pass < oc.fixed_point_cap; ++pass) {
    ++res.passes;
    res.solutions.assign(res.selections.size(), P1Solution{});
    bool changed = false;
    std::vector<UavSelection> next = res.selections;
    for (size_t i = 0; i < res.selections.size(); ++i) {
      const UavSelection &sel = res.selections[i];
      if (sel.devices.empty()) continue;
      int m = sel.uav;
      std::vector<DeviceProfile> profiles;
      std::vector<double> dists;
      for (int n : sel.devices) {
        profiles.push_back(st.devices[n].profile);
        dists.push_back(device_distance(st, n, m));
      }
      P1Instance inst = build_instance(profiles, dists, st.uavs[m].profile, st.channel,
                                       oc.lambda4, oc.lambda5);
      P1Solution sol = solve(inst, cfg.p1);
      res.solutions[i] = sol;
      if (!std::isfinite(st.t_stay)) continue;
      // Dwell-time feasibility: drop devices whose delay exceeds the bound, keep the fastest.
      UavSelection kept;
      kept.uav = m;
      int fastest = -1;
      double fastest_t = kInf;
      for (size_t j = 0; j < sel.devices.size(); ++j) {
        DeviceCost c = device_round_costs(profiles[j], sol.h_star, sol.b_d2u[j], sol.b_u2d[j],
                                          dists[j], st.channel, st.uavs[m].profile);
        if (c.t_dev < fastest_t) {
          fastest_t = c.t_dev;
          fastest = static_cast<int>(j);
        }
        if (c.t_dev <= st.t_stay) {
          kept.devices.push_back(sel.devices[j]);
          kept.alpha.push_back(sel.alpha[j]);
        }
      }
      if (kept.devices.empty()) {
        kept.devices.push_back(sel.devices[fastest]);
        kept.alpha.push_back(sel.alpha[fastest]);
      }
      if (kept.devices != sel.devices) {
        changed = true;
        next[i] = kept;
      }
    }
    if (!changed) break;
    res.selections = next;
  }
  (void)ctx;
  return res;
}

std::vector<int> handle_dropout(NetworkState &st, const std::vector<int> &flagged) {
  std::vector<int> removed;
  for (int m : flagged) {
    if (m >= 0 && static_cast<size_t>(m) < st.uavs.size() && st.uavs[m].active) {
      st.uavs[m].active = false;
      removed.push_back(m);
    }
  }
  std::sort(removed.begin(), removed.end());
  return removed;
}

bool periodic_global_aggregation(int g, int k, int period, bool flag) {
  (void)g;
  return flag || k >= period;
}

RoundLog run_global_round(NetworkState &st, const RunConfig &cfg) {
  const auto &oc = cfg.orchestrator;
  st.g += 1;
  const int g = st.g;
  RoundLog log;
  log.g = g;
  log.aggregator = st.aggregator;
  RoundContext ctx = build_context(st, cfg, g);
  const std::vector<int> &active = ctx.active;

  // Selection.
  std::vector<UavSelection> raw;
  std::vector<double> betas(st.uavs.size(), -1.0);
  for (int m : active) {
    const auto &alpha = ctx.alpha[m];
    std::vector<int> idx;
    if (alpha.empty()) {
      raw.push_back(make_selection(m, ctx, idx));
      continue;
    }
    if (oc.selection == "fixed") {
      betas[m] = oc.fixed_beta;
      idx = threshold_pick(alpha, oc.fixed_beta);
    } else if (oc.selection == "random") {
      for (size_t i = 0; i < alpha.size(); ++i) {
        Rng r = Rng::stream(cfg.seed, "random-select", static_cast<uint64_t>(m),
                            static_cast<uint64_t>(g), static_cast<uint64_t>(ctx.covered[m][i]));
        if (r.bernoulli(oc.random_prob)) idx.push_back(static_cast<int>(i));
      }
      if (idx.empty()) idx = threshold_pick(alpha, 2.0);
    } else {
      Td3Agent &agent = st.agents[m];
      AgentState s = st.uavs[m].rl_state;
      CandidateEnv env = make_env(st, cfg, ctx, m, s, agent.alpha_tilde());
      EpisodeResult ep = episode_step(agent, s, env, cfg.p2.td3.t_step, cfg.p2.terminal);
      betas[m] = ep.chosen;
      idx = threshold_pick(alpha, ep.chosen);
    }
    raw.push_back(make_selection(m, ctx, idx));
  }
  std::vector<UavSelection> resolved = resolve_overlaps(raw);

  FixedPointResult fp = p1_p2_fixed_point(st, cfg, ctx, resolved);
  log.fixed_point_passes = fp.passes;
  const auto &sels = fp.selections;
  const auto &sols = fp.solutions;
  const size_t na = active.size();

  // Per-device costs of one edge iteration are fixed within the round.
  std::vector<std::vector<DeviceCost>> dcost(na);
  for (size_t i = 0; i < na; ++i) {
    int m = active[i];
    for (size_t j = 0; j < sels[i].devices.size(); ++j) {
      int n = sels[i].devices[j];
      dcost[i].push_back(device_round_costs(st.devices[n].profile, sols[i].h_star,
                                            sols[i].b_d2u[j], sols[i].b_u2d[j],
                                            device_distance(st, n, m), st.channel,
                                            st.uavs[m].profile));
    }
  }

  // Edge iterations with the energy check after each one.
  std::vector<ModelParams> edge_model(na, st.global);
  std::vector<std::vector<double>> hover(na), t_u2d(na), e_uav(na);
  std::vector<std::vector<std::vector<double>>> e_dev(na);
  std::vector<double> used(na, 0.0), hist(na, 0.0);
  std::vector<char> flagged(na, 0);
  struct Job {
    size_t i;
    size_t j;
  };
  std::vector<Job> jobs;
  for (size_t i = 0; i < na; ++i) {
    for (size_t j = 0; j < sels[i].devices.size(); ++j) jobs.push_back({i, j});
  }
  int k_bar = oc.k_max;
  bool phi = false;
  for (int k = 1; k <= oc.k_max; ++k) {
    std::vector<ModelParams> local(jobs.size());
    parallel_for(jobs.size(), [&](size_t q) {
      const Job &jb = jobs[q];
      int n = sels[jb.i].devices[jb.j];
      TrainConfig tc{cfg.learner.eta, sols[jb.i].h_star, cfg.learner.phi,
                     sub_seed(cfg.seed, "sgd", static_cast<uint64_t>(n), static_cast<uint64_t>(g),
                              static_cast<uint64_t>(k))};
      local[q] = local_sgd(edge_model[jb.i], st.devices[n].data, tc);
    });
    size_t q = 0;
    for (size_t i = 0; i < na; ++i) {
      const auto &devs = sels[i].devices;
      if (devs.empty()) {
        hover[i].push_back(0.0);
        t_u2d[i].push_back(0.0);
        e_uav[i].push_back(0.0);
        e_dev[i].push_back({});
        continue;
      }
      std::vector<const ModelParams *> ms;
      std::vector<double> w;
      double hv = 0.0;
      double tu = 0.0;
      std::vector<double> ed;
      for (size_t j = 0; j < devs.size(); ++j, ++q) {
        ms.push_back(&local[q]);
        w.push_back(static_cast<double>(st.devices[devs[j]].data.size()));
        hv = std::max(hv, dcost[i][j].t_dev);
        tu = std::max(tu, dcost[i][j].t_u2d);
        ed.push_back(dcost[i][j].e_dev);
      }
      edge_model[i] = fedavg(ms, w);
      double e = uav_round_energy(hv, tu, st.uavs[active[i]].profile);
      hover[i].push_back(hv);
      t_u2d[i].push_back(tu);
      e_uav[i].push_back(e);
      e_dev[i].push_back(ed);
      used[i] += e;
      hist[i] = std::max(hist[i], e);
      double remaining = st.uavs[active[i]].battery;
      EnergyCheck chk = energy_check(used[i], hist[i], remaining);
      if (chk.disconnect_flag || used[i] > remaining) flagged[i] = 1;
    }
    bool any_flag = std::any_of(flagged.begin(), flagged.end(), [](char f) { return f != 0; });
    if (periodic_global_aggregation(g, k, oc.k_max, any_flag)) {
      phi = any_flag;
      k_bar = k;
      break;
    }
  }
  log.phi = phi;
  log.k_g = edge_iterations(phi, k_bar, oc.k_max);

  // Global aggregation at the elected UAV.
  ModelParams prev_global = st.global;
  {
    std::vector<const ModelParams *> ms;
    std::vector<double> w;
    for (size_t i = 0; i < na; ++i) {
      double size = 0.0;
      for (int n : sels[i].devices) size += static_cast<double>(st.devices[n].data.size());
      if (size > 0) {
        ms.push_back(&edge_model[i]);
        w.push_back(size);
      }
    }
    if (!ms.empty()) st.global = fedavg(ms, w);
  }
  st.global.g = g;
  st.global_metrics = eval_metrics(st.global, st.test);
  log.accuracy = st.global_metrics.accuracy;
  log.loss = st.global_metrics.loss;
  for (size_t i = 0; i < na; ++i) {
    if (!sels[i].devices.empty()) {
      Metrics mm = eval_metrics(edge_model[i], st.test);
      st.uavs[active[i]].rl_state = {mm.loss, mm.accuracy};
    }
  }

  // Model exchange with the aggregator and broadcast, at the pre-move positions.
  size_t agg_idx = static_cast<size_t>(
      std::find(active.begin(), active.end(), st.aggregator) - active.begin());
  if (agg_idx >= na) throw std::logic_error("aggregator is not an active UAV");
  const UavState &agg = st.uavs[st.aggregator];
  std::vector<double> t_e2g(na, 0.0);
  std::vector<BroadcastUav> bu(na);
  for (size_t i = 0; i < na; ++i) {
    const UavState &u = st.uavs[active[i]];
    double link = uav_link_distance(u.pos, agg.pos);
    if (i != agg_idx) {
      t_e2g[i] = e2g_time(u.profile.i_u2u, link_rate(u.profile.b_u2u, u.profile.p_u2u, link,
                                                     st.channel.alpha_u2u, st.channel.n0));
      bu[i].rate_from_aggregator = link_rate(agg.profile.b_u2u, agg.profile.p_u2u, link,
                                             st.channel.alpha_u2u, st.channel.n0);
    }
    bu[i].p_u2u = u.profile.p_u2u;
    bu[i].p_u2d = u.profile.p_u2d;
    bu[i].p_hover = u.profile.p_hover;
    for (size_t j = 0; j < sels[i].devices.size(); ++j) {
      int n = sels[i].devices[j];
      bu[i].rates_u2d.push_back(link_rate(sols[i].b_u2d[j], u.profile.p_u2d,
                                          device_distance(st, n, active[i]),
                                          st.channel.alpha_u2d, st.channel.n0));
    }
  }
  double i_g = cfg.device.model_bits;
  log.costs.broadcast = broadcast_costs(bu, static_cast<int>(agg_idx), i_g);
  const BroadcastCosts &bc = log.costs.broadcast;

  // Battery draw before any relocation.
  std::vector<double> draw(na, 0.0);
  for (size_t i = 0; i < na; ++i) {
    const UavState &u = st.uavs[active[i]];
    double own_u2d = 0.0;
    for (double r : bu[i].rates_u2d) own_u2d = std::max(own_u2d, i_g / r);
    double share = own_u2d * u.profile.p_u2d + bc.t_broad * u.profile.p_hover;
    if (i == agg_idx && na > 1) {
      double max_u2u = 0.0;
      for (size_t o = 0; o < na; ++o) {
        if (o != agg_idx) max_u2u = std::max(max_u2u, i_g / bu[o].rate_from_aggregator);
      }
      share += max_u2u * u.profile.p_u2u;
    }
    double e_sum = std::accumulate(e_uav[i].begin(), e_uav[i].end(), 0.0);
    draw[i] = e_sum + t_e2g[i] * u.profile.p_hover + share;
  }

  std::vector<UavPos> pre_positions = st.uav_positions();
  std::vector<DevicePos> dpos = st.device_positions();
  log.coverage_before_drop = union_coverage(pre_positions, active, dpos, cfg.net.radius);
  std::vector<int> flagged_ids;
  for (size_t i = 0; i < na; ++i) {
    UavRoundLog ul;
    UavState &u = st.uavs[active[i]];
    ul.uav = u.id;
    ul.beta = betas[u.id];
    ul.covered = static_cast<int>(ctx.covered[u.id].size());
    ul.selected = sels[i].devices;
    ul.h_star = sels[i].devices.empty() ? 0 : sols[i].h_star;
    ul.flagged = flagged[i] != 0;
    ul.battery_start = u.battery;
    u.battery = std::max(0.0, u.battery - draw[i]);
    ul.energy_used = ul.battery_start - u.battery;
    for (int n : sels[i].devices) st.devices[n].times_selected += 1;
    log.n_selected += static_cast<int>(sels[i].devices.size());
    if (flagged[i]) flagged_ids.push_back(u.id);
    log.uavs.push_back(std::move(ul));
  }
  log.dropouts = handle_dropout(st, flagged_ids);
  std::vector<int> survivors = st.active_ids();
  log.coverage_after_drop = union_coverage(pre_positions, survivors, dpos, cfg.net.radius);

  // Redeployment of the survivors.
  std::vector<RelocationCost> reloc(na);
  for (size_t i = 0; i < na; ++i) {
    const UavProfile &p = st.uavs[active[i]].profile;
    reloc[i].t_delay = t_e2g[i];
    reloc[i].e_delay = t_e2g[i] * p.p_hover;
  }
  if (!survivors.empty() && oc.redeploy == "greedy") {
    RedeployInput in;
    in.positions = pre_positions;
    in.active = survivors;
    for (const auto &u : st.uavs) {
      in.profiles.push_back(u.profile);
      in.energy_budget.push_back(u.battery);
    }
    in.devices = dpos;
    in.radius = cfg.net.radius;
    in.field_size = cfg.net.field_size;
    RedeployResult rr = redeploy_and_select(in, cfg.p3);
    for (const auto &mv : rr.moves) {
      size_t i = static_cast<size_t>(std::find(active.begin(), active.end(), mv.uav) -
                                     active.begin());
      UavState &u = st.uavs[mv.uav];
      u.pos = rr.positions[mv.uav];
      reloc[i].distance = mv.relocation.distance;
      reloc[i].move_time = mv.relocation.move_time;
      reloc[i].move_energy = mv.relocation.move_energy;
      reloc[i].t_delay += mv.relocation.move_time;
      reloc[i].e_delay += mv.relocation.move_energy;
      double before = u.battery;
      u.battery = std::max(0.0, u.battery - mv.relocation.move_energy);
      log.uavs[i].energy_used += before - u.battery;
      log.move_distance += mv.relocation.distance;
      for (double v : mv.rough.accepted_values) log.moves.push_back({mv.uav, 0, v, cfg.p3.xi1});
      for (double v : mv.precise.accepted_values) {
        log.moves.push_back({mv.uav, 1, v, cfg.p3.xi2});
      }
    }
  }
  for (size_t i = 0; i < na; ++i) log.uavs[i].battery_end = st.uavs[active[i]].battery;
  log.coverage_after_redeploy =
      union_coverage(st.uav_positions(), survivors, dpos, cfg.net.radius);

  // Round totals.
  std::vector<UavRoundParts> parts(na);
  for (size_t i = 0; i < na; ++i) {
    UavCostBreakdown ub;
    ub.uav = active[i];
    ub.hover = hover[i];
    ub.t_u2d = t_u2d[i];
    ub.e_uav = e_uav[i];
    for (const auto &ed : e_dev[i]) {
      ub.e_devices.push_back(std::accumulate(ed.begin(), ed.end(), 0.0));
    }
    ub.devices = dcost[i];
    ub.t_e2g = t_e2g[i];
    ub.relocation = reloc[i];
    EdgeTotals et = edge_totals(hover[i], e_uav[i], e_dev[i]);
    parts[i] = UavRoundParts{et.t_edge, et.e_edge, reloc[i].t_delay, reloc[i].e_delay};
    ub.parts = parts[i];
    log.costs.uavs.push_back(std::move(ub));
  }
  log.costs.totals = global_totals(parts, bc);
  log.t_g = log.costs.totals.t;
  log.e_g = log.costs.totals.e;

  log.uav_positions = st.uav_positions();
  for (const auto &u : st.uavs) log.uav_active.push_back(u.active ? 1 : 0);
  if (survivors.empty()) {
    log.fleet_exhausted = true;
    log.device_positions = dpos;
    log.converged = converged(st.global, prev_global, oc.delta);
    return log;
  }
  st.aggregator = elect_aggregator(log.uav_positions, survivors).uav;
  log.next_aggregator = st.aggregator;

  // Device mobility at the round boundary.
  std::vector<UavPos> surv_pos;
  for (int m : survivors) surv_pos.push_back(st.uavs[m].pos);
  MobilityModel mob{cfg.net.xi, cfg.seed};
  std::vector<DevicePos> moved = move_devices(dpos, surv_pos, cfg.net.radius, cfg.net.field_size,
                                              mob, static_cast<uint64_t>(g));
  for (size_t n = 0; n < moved.size(); ++n) st.devices[n].pos = moved[n];
  log.device_positions = moved;

  if (!(oc.t_stay > 0)) st.t_stay = log.t_g;
  log.converged = converged(st.global, prev_global, oc.delta);
  return log;
}

RunSummary run(const RunConfig &cfg) {
  auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  RunSummary sum;
  sum.config_hash = config_hash(cfg);
  sum.run_id = "hflsim-" + sum.config_hash;
  NetworkState st = init_state(cfg);
  sum.initial_uavs = st.uav_positions();
  sum.initial_devices = st.device_positions();
  sum.final_accuracy = st.global_metrics.accuracy;
  sum.final_loss = st.global_metrics.loss;
  if (cfg.orchestrator.max_rounds == 0) {
    sum.status = "not-run";
    return sum;
  }
  pretrain_agents(st, cfg);
  sum.status = "max-rounds";
  double cum_cost = 0.0;
  for (int r = 0; r < cfg.orchestrator.max_rounds; ++r) {
    RoundLog log = run_global_round(st, cfg);
    sum.rounds = log.g;
    sum.total_t += log.t_g;
    sum.total_e += log.e_g;
    cum_cost += weighted_objective(cfg.orchestrator.lambda4, cfg.orchestrator.lambda5, log.e_g,
                                   log.t_g);
    sum.final_accuracy = log.accuracy;
    sum.final_loss = log.loss;
    if (sum.target_round < 0 && log.accuracy >= cfg.orchestrator.target_accuracy) {
      sum.target_round = log.g;
      sum.cost_to_target = cum_cost;
    }
    for (int m : log.dropouts) sum.dropout_timeline.emplace_back(log.g, m);
    bool exhausted = log.fleet_exhausted;
    bool conv = log.converged;
    sum.logs.push_back(std::move(log));
    if (exhausted) {
      sum.status = "fleet-exhausted";
      break;
    }
    if (conv) {
      sum.status = "converged";
      break;
    }
  }
  sum.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sum;
}

}  // namespace hflsim
