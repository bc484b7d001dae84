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
#include "hflsim/cost_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace hflsim {

void DeviceProfile::validate() const {
  if (!(f > 0 && c > 0 && phi > 0 && phi <= 1 && theta > 0 && t_fix >= 0 && p_d2u > 0 &&
        dataset_size >= 1 && i_d2u > 0)) {
    throw std::invalid_argument("invalid device profile");
  }
}

void UavProfile::validate() const {
  if (!(p_hover > 0 && p_move > 0 && speed > 0 && p_u2d > 0 && p_u2u > 0 && battery >= 0 &&
        b_d2u_total > 0 && b_u2d_total > 0 && b_u2u > 0 && i_u2d > 0 && i_u2u > 0)) {
    throw std::invalid_argument("invalid UAV profile");
  }
}

double t_unit(const DeviceProfile &p) { return p.t_fix + p.phi * p.c * p.dataset_size / p.f; }

double e_cmp(const DeviceProfile &p, double h) {
  if (h < 1) throw std::invalid_argument("e_cmp: local iterations must be >= 1");
  return h * p.f * p.f * p.phi * p.c * p.dataset_size * p.theta / 2.0;
}

DeviceCost device_round_costs(const DeviceProfile &profile, double h, double b_d2u, double b_u2d,
                              double dist, const ChannelParams &channel, const UavProfile &uav) {
  double r_d2u = link_rate(b_d2u, profile.p_d2u, dist, channel.alpha_d2u, channel.n0);
  double r_u2d = link_rate(b_u2d, uav.p_u2d, dist, channel.alpha_u2d, channel.n0);
  if (!(r_d2u > 0) || !(r_u2d > 0)) {
    throw std::runtime_error("device_round_costs: zero link rate gives unbounded delay");
  }
  DeviceCost c;
  c.t_cmp = h * t_unit(profile);
  c.e_cmp = e_cmp(profile, h);
  c.t_d2u = profile.i_d2u / r_d2u;
  c.t_u2d = uav.i_u2d / r_u2d;
  c.t_com = c.t_d2u + c.t_u2d;
  c.e_com = c.t_d2u * profile.p_d2u;
  c.t_dev = c.t_cmp + c.t_com;
  c.e_dev = c.e_cmp + c.e_com;
  return c;
}

double uav_round_energy(double hover_time, double t_u2d, const UavProfile &uav) {
  return hover_time * uav.p_hover + t_u2d * uav.p_u2d;
}

EnergyCheck energy_check(double used, double history_max, double remaining) {
  EnergyCheck out;
  out.used = used;
  out.projected_next = history_max;
  out.remaining = remaining;
  out.disconnect_flag = used <= remaining && remaining <= used + history_max;
  return out;
}

int edge_iterations(bool phi_flag, int k_bar, int k_max) {
  if (k_bar < 1 || k_bar > k_max) throw std::invalid_argument("edge_iterations: k_bar range");
  return phi_flag ? k_bar : k_max;
}

EdgeTotals edge_totals(const std::vector<double> &per_round_hover,
                       const std::vector<double> &per_round_uav_e,
                       const std::vector<std::vector<double>> &device_e) {
  if (per_round_hover.size() != per_round_uav_e.size() ||
      per_round_hover.size() != device_e.size()) {
    throw std::invalid_argument("edge_totals: per-round lists differ in length");
  }
  EdgeTotals t;
  for (size_t k = 0; k < per_round_hover.size(); ++k) {
    t.t_edge += per_round_hover[k];
    double e = per_round_uav_e[k];
    for (double d : device_e[k]) e += d;
    t.e_edge += e;
  }
  return t;
}

double e2g_time(double i_u2u, double rate_u2u) {
  if (!(rate_u2u > 0)) throw std::runtime_error("e2g_time: zero U2U rate");
  return i_u2u / rate_u2u;
}

RelocationCost relocation_costs(const UavPos &old_pos, const UavPos &new_pos,
                                const UavProfile &uav, double t_e2g) {
  if (!(uav.speed > 0)) throw std::invalid_argument("relocation_costs: speed must be positive");
  RelocationCost r;
  r.distance = horizontal_distance(old_pos, new_pos);
  r.move_time = r.distance / uav.speed;
  r.move_energy = uav.p_move * r.move_time;
  r.t_delay = t_e2g + r.move_time;
  r.e_delay = t_e2g * uav.p_hover + r.move_energy;
  return r;
}

namespace {

double max_u2d_time(const std::vector<double> &rates, double i_g) {
  double t = 0.0;
  for (double r : rates) {
    if (!(r > 0)) throw std::runtime_error("broadcast_costs: zero U2D rate");
    t = std::max(t, i_g / r);
  }
  return t;
}

}  // namespace

BroadcastCosts broadcast_costs(const std::vector<BroadcastUav> &uavs, int aggregator,
                               double i_g) {
  if (aggregator < 0 || static_cast<size_t>(aggregator) >= uavs.size()) {
    throw std::invalid_argument("broadcast_costs: no aggregator");
  }
  BroadcastCosts out;
  double max_u2u_time = 0.0;
  double t_broad = 0.0;
  bool has_peer = false;
  for (size_t m = 0; m < uavs.size(); ++m) {
    if (static_cast<int>(m) == aggregator) continue;
    has_peer = true;
    if (!(uavs[m].rate_from_aggregator > 0)) {
      throw std::runtime_error("broadcast_costs: zero U2U rate");
    }
    double t_u2u = i_g / uavs[m].rate_from_aggregator;
    max_u2u_time = std::max(max_u2u_time, t_u2u);
    t_broad = std::max(t_broad, t_u2u + max_u2d_time(uavs[m].rates_u2d, i_g));
  }
  // A lone aggregator still has to reach its own devices.
  if (!has_peer) t_broad = max_u2d_time(uavs[aggregator].rates_u2d, i_g);
  out.t_broad = t_broad;
  out.e_broad = max_u2u_time * uavs[aggregator].p_u2u;
  for (const auto &u : uavs) out.e_broad += max_u2d_time(u.rates_u2d, i_g) * u.p_u2d;
  for (const auto &u : uavs) out.e_bwait += t_broad * u.p_hover;
  return out;
}

GlobalTotals global_totals(const std::vector<UavRoundParts> &parts,
                           const BroadcastCosts &broadcast) {
  GlobalTotals g;
  double slowest = 0.0;
  double e = 0.0;
  for (const auto &p : parts) {
    slowest = std::max(slowest, p.t_edge + p.t_delay);
    e += p.e_edge + p.e_delay;
  }
  g.t = broadcast.t_broad + slowest;
  g.e = broadcast.e_broad + broadcast.e_bwait + e;
  return g;
}

double weighted_objective(double lambda4, double lambda5, double e, double t) {
  return lambda4 * e + lambda5 * t;
}

}  // namespace hflsim
