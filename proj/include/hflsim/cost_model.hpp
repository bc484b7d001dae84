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
#ifndef HFLSIM_COST_MODEL_HPP_
#define HFLSIM_COST_MODEL_HPP_

#include <vector>

#include "hflsim/net_model.hpp"

namespace hflsim {

struct DeviceProfile {
  double f = 1e9;        // CPU frequency, Hz
  double c = 1.0;        // cycles per sample
  double phi = 1.0;      // minibatch fraction
  double theta = 1e-28;  // effective capacitance
  double t_fix = 0.0;    // s
  double p_d2u = 0.5;    // W
  double dataset_size = 1.0;
  double i_d2u = 1.0;  // bits

  void validate() const;
};

struct UavProfile {
  double p_hover = 100.0;
  double p_move = 160.0;
  double speed = 16.0;
  double p_u2d = 1.0;
  double p_u2u = 1.0;
  double battery = 1e6;
  double b_d2u_total = 20e6;
  double b_u2d_total = 20e6;
  double b_u2u = 2e6;
  double i_u2d = 1.0;
  double i_u2u = 1.0;

  void validate() const;
};

struct DeviceCost {
  double t_cmp = 0.0;
  double e_cmp = 0.0;
  double t_d2u = 0.0;
  double t_u2d = 0.0;
  double t_com = 0.0;
  double e_com = 0.0;
  double t_dev = 0.0;
  double e_dev = 0.0;
};

struct EnergyCheck {
  double used = 0.0;
  double projected_next = 0.0;
  double remaining = 0.0;
  bool disconnect_flag = false;
};

struct EdgeTotals {
  double t_edge = 0.0;
  double e_edge = 0.0;
};

struct RelocationCost {
  double t_delay = 0.0;
  double e_delay = 0.0;
  double distance = 0.0;
  double move_time = 0.0;
  double move_energy = 0.0;
};

// Per-UAV inputs to the broadcast phase.
struct BroadcastUav {
  double p_u2u = 0.0;
  double p_u2d = 0.0;
  double p_hover = 0.0;
  double rate_from_aggregator = 0.0;  // U2U rate aggregator -> this UAV (ignored for the aggregator)
  std::vector<double> rates_u2d;      // per selected device
};

struct BroadcastCosts {
  double t_broad = 0.0;
  double e_broad = 0.0;
  double e_bwait = 0.0;
};

// Per-UAV components of one global round.
struct UavRoundParts {
  double t_edge = 0.0;
  double e_edge = 0.0;
  double t_delay = 0.0;
  double e_delay = 0.0;
};

struct GlobalTotals {
  double t = 0.0;
  double e = 0.0;
};

// Every delay/energy term of one global round, kept for auditing.
struct UavCostBreakdown {
  int uav = -1;
  std::vector<double> hover;      // per intermediate round, s
  std::vector<double> t_u2d;      // per intermediate round, s
  std::vector<double> e_uav;      // per intermediate round, J
  std::vector<double> e_devices;  // per intermediate round, sum over selected devices, J
  std::vector<DeviceCost> devices;  // costs of one intermediate round per selected device
  double t_e2g = 0.0;
  RelocationCost relocation;
  UavRoundParts parts;
};

struct CostBreakdown {
  std::vector<UavCostBreakdown> uavs;
  BroadcastCosts broadcast;
  GlobalTotals totals;
};

double t_unit(const DeviceProfile &profile);
double e_cmp(const DeviceProfile &profile, double h);

// Throws std::runtime_error when a link rate is zero (infinite delay).
DeviceCost device_round_costs(const DeviceProfile &profile, double h, double b_d2u, double b_u2d,
                              double dist, const ChannelParams &channel, const UavProfile &uav);

double uav_round_energy(double hover_time, double t_u2d, const UavProfile &uav);

// `remaining` is the battery available at the start of the global round.
EnergyCheck energy_check(double used, double history_max, double remaining);

int edge_iterations(bool phi_flag, int k_bar, int k_max);

EdgeTotals edge_totals(const std::vector<double> &per_round_hover,
                       const std::vector<double> &per_round_uav_e,
                       const std::vector<std::vector<double>> &device_e);

double e2g_time(double i_u2u, double rate_u2u);

RelocationCost relocation_costs(const UavPos &old_pos, const UavPos &new_pos,
                                const UavProfile &uav, double t_e2g);

// `uavs[aggregator]` is the broadcasting UAV.
BroadcastCosts broadcast_costs(const std::vector<BroadcastUav> &uavs, int aggregator, double i_g);

GlobalTotals global_totals(const std::vector<UavRoundParts> &parts,
                           const BroadcastCosts &broadcast);

double weighted_objective(double lambda4, double lambda5, double e, double t);

}  // namespace hflsim

#endif  // HFLSIM_COST_MODEL_HPP_
