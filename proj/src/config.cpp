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
#include "hflsim/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hflsim/rng.hpp"
#include "json.hpp"

namespace hflsim {

using nlohmann::json;

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(NetConfig, field_size, n_uavs, n_devices, radius,
                                                altitude, xi, alpha_d2u, alpha_u2d, alpha_u2u,
                                                n0_dbm_per_hz, uav_positions)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DeviceConfig, f_min, f_max, cycles_per_bit_min,
                                                cycles_per_bit_max, bits_per_sample, theta, t_fix,
                                                p_d2u_min, p_d2u_max, model_bits)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(UavConfig, p_hover, p_move, speed, p_u2u_min,
                                                p_u2u_max, p_u2d_min, p_u2d_max, bandwidth_min,
                                                bandwidth_max, b_u2u, battery, batteries)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LearnerConfig, scheme, samples_per_device, hidden,
                                                eta, phi, test_samples, probe_samples,
                                                center_radius, cluster_std, personal_samples,
                                                personal_steps)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(P1Config, sigma0, upsilon0, zeta1, zeta2, rho,
                                                eta_hat, h0, inner_cap, outer_cap, kappa_floor,
                                                eps_final, progress_ratio)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Td3Config, gamma, tau, policy_delay, noise_sigma,
                                                noise_clip, buffer_capacity, batch_size, alpha0,
                                                delta_alpha, hidden, actor_lr, critic_lr, warmup,
                                                t_step, lambda6, lambda7)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(P2Config, lambda1, lambda2, lambda3, td3,
                                                pretrain, t_max, terminal)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SearchConfig, d_set, d_set_fine, n_rough, n_fine,
                                                xi1, xi2, chi1, chi2, lambda8, lambda9)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OrchestratorConfig, selection, fixed_beta,
                                                redeploy, lambda4, lambda5, delta, max_rounds,
                                                k_max, fixed_point_cap, t_stay, random_prob,
                                                target_accuracy)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, seed, scenario, out_dir, net, device,
                                                uav, learner, p1, p2, p3, orchestrator)

namespace {

std::string join(const std::string &path, const std::string &key) {
  return path.empty() ? key : path + "." + key;
}

// Overlays `user` onto `base`, rejecting keys and value kinds the defaults do not have.
void merge_checked(json &base, const json &user, const std::string &path) {
  if (!user.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    std::string p = join(path, it.key());
    auto found = base.find(it.key());
    if (found == base.end()) throw ConfigError(p, "unknown key");
    json &dst = *found;
    const json &src = it.value();
    if (dst.is_object()) {
      merge_checked(dst, src, p);
      continue;
    }
    bool ok = false;
    if (dst.is_boolean()) {
      ok = src.is_boolean();
    } else if (dst.is_number_integer()) {
      ok = src.is_number_integer() && (!dst.is_number_unsigned() || src.is_number_unsigned() ||
                                       src.get<int64_t>() >= 0);
    } else if (dst.is_number()) {
      ok = src.is_number();
    } else if (dst.is_string()) {
      ok = src.is_string();
    } else if (dst.is_array()) {
      ok = src.is_array();
    }
    if (!ok) throw ConfigError(p, "wrong value type (" + std::string(src.type_name()) + ")");
    dst = src;
  }
}

void check(bool cond, const std::string &path, const std::string &what) {
  if (!cond) throw ConfigError(path, what);
}

template <class F>
void wrap(const std::string &path, F &&f) {
  try {
    f();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(path, e.what());
  }
}

RunConfig from_merged(const json &merged) {
  RunConfig cfg;
  try {
    cfg = merged.get<RunConfig>();
  } catch (const json::exception &e) {
    throw ConfigError("<root>", e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace

void RunConfig::validate() const {
  const auto &n = net;
  check(n.field_size > 0, "net.field_size", "must be positive");
  check(n.n_uavs >= 1, "net.n_uavs", "must be >= 1");
  check(n.n_devices >= 1, "net.n_devices", "must be >= 1");
  check(n.radius > 0, "net.radius", "must be positive");
  check(n.altitude > 0, "net.altitude", "must be positive");
  check(n.xi >= 0 && n.xi <= 1, "net.xi", "must lie in [0,1]");
  check(n.alpha_d2u > 0, "net.alpha_d2u", "must be positive");
  check(n.alpha_u2d > 0, "net.alpha_u2d", "must be positive");
  check(n.alpha_u2u > 0, "net.alpha_u2u", "must be positive");
  check(n.uav_positions.empty() || n.uav_positions.size() == static_cast<size_t>(n.n_uavs),
        "net.uav_positions", "must list one [x, y] per UAV");
  for (const auto &p : n.uav_positions) {
    check(p.size() == 2, "net.uav_positions", "entries must be [x, y]");
    check(in_field(p[0], p[1], n.field_size), "net.uav_positions", "position outside the field");
  }

  const auto &d = device;
  check(d.f_min > 0 && d.f_max >= d.f_min, "device.f_min", "need 0 < f_min <= f_max");
  check(d.cycles_per_bit_min > 0 && d.cycles_per_bit_max >= d.cycles_per_bit_min,
        "device.cycles_per_bit_min", "need 0 < min <= max");
  check(d.bits_per_sample > 0, "device.bits_per_sample", "must be positive");
  check(d.theta > 0, "device.theta", "must be positive");
  check(d.t_fix >= 0, "device.t_fix", "must be >= 0");
  check(d.p_d2u_min > 0 && d.p_d2u_max >= d.p_d2u_min, "device.p_d2u_min",
        "need 0 < min <= max");
  check(d.model_bits > 0, "device.model_bits", "must be positive");

  const auto &u = uav;
  check(u.p_hover > 0, "uav.p_hover", "must be positive");
  check(u.p_move > 0, "uav.p_move", "must be positive");
  check(u.speed > 0, "uav.speed", "must be positive");
  check(u.p_u2u_min > 0 && u.p_u2u_max >= u.p_u2u_min, "uav.p_u2u_min", "need 0 < min <= max");
  check(u.p_u2d_min > 0 && u.p_u2d_max >= u.p_u2d_min, "uav.p_u2d_min", "need 0 < min <= max");
  check(u.bandwidth_min > 0 && u.bandwidth_max >= u.bandwidth_min, "uav.bandwidth_min",
        "need 0 < min <= max");
  check(u.b_u2u > 0, "uav.b_u2u", "must be positive");
  check(u.battery > 0, "uav.battery", "must be positive");
  check(u.batteries.empty() || u.batteries.size() == static_cast<size_t>(n.n_uavs),
        "uav.batteries", "must list one value per UAV");
  for (double b : u.batteries) check(b > 0, "uav.batteries", "must be positive");

  const auto &l = learner;
  check(l.scheme == "A" || l.scheme == "B", "learner.scheme", "must be \"A\" or \"B\"");
  check(l.samples_per_device >= 1, "learner.samples_per_device", "must be >= 1");
  check(l.hidden >= 0, "learner.hidden", "must be >= 0");
  check(l.eta > 0, "learner.eta", "must be positive");
  check(l.phi > 0 && l.phi <= 1, "learner.phi", "must lie in (0,1]");
  check(l.test_samples >= 1, "learner.test_samples", "must be >= 1");
  check(l.probe_samples >= 1, "learner.probe_samples", "must be >= 1");
  check(l.center_radius > 0, "learner.center_radius", "must be positive");
  check(l.cluster_std > 0, "learner.cluster_std", "must be positive");
  check(l.personal_samples >= 1, "learner.personal_samples", "must be >= 1");
  check(l.personal_steps >= 0, "learner.personal_steps", "must be >= 0");

  wrap("p1", [&] { p1.validate(); });
  wrap("p2.td3", [&] { p2.td3.validate(); });
  for (auto [v, name] : {std::pair{p2.lambda1, "p2.lambda1"}, std::pair{p2.lambda2, "p2.lambda2"},
                         std::pair{p2.lambda3, "p2.lambda3"}}) {
    check(v >= 0 && v <= 1, name, "must lie in [0,1]");
  }
  check(std::abs(p2.lambda1 + p2.lambda2 + p2.lambda3 - 1.0) <= 1e-9, "p2.lambda1",
        "lambda1 + lambda2 + lambda3 must equal 1");
  check(p2.pretrain >= 0, "p2.pretrain", "must be >= 0");
  check(p2.t_max >= 0, "p2.t_max", "must be >= 0");
  wrap("p3", [&] { p3.validate(); });

  const auto &o = orchestrator;
  check(o.selection == "adaptive" || o.selection == "random" || o.selection == "distance-only" ||
            o.selection == "similarity-only" || o.selection == "fixed",
        "orchestrator.selection", "unknown selection strategy '" + o.selection + "'");
  check(o.fixed_beta >= 0 && o.fixed_beta <= 1, "orchestrator.fixed_beta", "must lie in [0,1]");
  check(o.redeploy == "greedy" || o.redeploy == "direct-drop", "orchestrator.redeploy",
        "unknown redeploy strategy '" + o.redeploy + "'");
  check(o.lambda4 >= 0 && o.lambda5 >= 0 && o.lambda4 + o.lambda5 > 0, "orchestrator.lambda4",
        "weights must be >= 0 and not both zero");
  check(o.delta > 0, "orchestrator.delta", "must be positive");
  check(o.max_rounds >= 0, "orchestrator.max_rounds", "must be >= 0");
  check(o.k_max >= 1, "orchestrator.k_max", "must be >= 1");
  check(o.fixed_point_cap >= 1, "orchestrator.fixed_point_cap", "must be >= 1");
  check(o.t_stay >= 0, "orchestrator.t_stay", "must be >= 0");
  check(o.random_prob >= 0 && o.random_prob <= 1, "orchestrator.random_prob",
        "must lie in [0,1]");
  check(o.target_accuracy >= 0 && o.target_accuracy <= 1, "orchestrator.target_accuracy",
        "must lie in [0,1]");
}

RunConfig apply_overrides(const RunConfig &base, const std::string &json_text) {
  json merged = base;
  bool blank = json_text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (!blank) {
    json user;
    try {
      user = json::parse(json_text);
    } catch (const json::parse_error &e) {
      throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    merge_checked(merged, user, "");
  }
  return from_merged(merged);
}

RunConfig parse_config_text(const std::string &text) { return apply_overrides(RunConfig{}, text); }

RunConfig parse_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string canonical_dump(const RunConfig &cfg) {
  json j = cfg;
  return j.dump();
}

std::string config_hash(const RunConfig &cfg) {
  // The output location does not change the experiment.
  RunConfig keyed = cfg;
  keyed.out_dir.clear();
  uint64_t h = name_hash(canonical_dump(keyed));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace hflsim
