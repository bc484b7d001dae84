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
#ifndef HFLSIM_ORCHESTRATOR_HPP_
#define HFLSIM_ORCHESTRATOR_HPP_

#include <string>
#include <utility>
#include <vector>

#include "hflsim/config.hpp"
#include "hflsim/cost_model.hpp"
#include "hflsim/learner.hpp"
#include "hflsim/net_model.hpp"
#include "hflsim/p1_alm.hpp"
#include "hflsim/p2_td3.hpp"
#include "hflsim/p3_greedy.hpp"

namespace hflsim {

using StrategyConfig = OrchestratorConfig;

struct DeviceState {
  int id = -1;
  DevicePos pos;
  DeviceProfile profile;
  Dataset data;
  Dataset probe;  // small batch used for model-difference scoring
  int times_selected = 0;
};

struct UavState {
  int id = -1;
  bool active = true;
  UavPos pos;
  UavProfile profile;
  double battery = 0.0;
  ModelParams personal;
  AgentState rl_state{};  // (loss, accuracy) of the last intermediate model
};

struct NetworkState {
  int g = 0;
  std::vector<UavState> uavs;
  std::vector<DeviceState> devices;
  std::vector<Td3Agent> agents;  // one per UAV id; empty when the strategy needs none
  ModelParams global;
  Metrics global_metrics;
  Dataset test;
  ChannelParams channel;
  int aggregator = 0;
  double t_stay = 0.0;  // dwell bound for the coming round, +inf when unbounded
  bool pretrained = false;

  std::vector<int> active_ids() const;
  std::vector<UavPos> uav_positions() const;
  std::vector<DevicePos> device_positions() const;
};

// Per-round inputs shared by selection, the learning agent and the feasibility loop.
struct RoundContext {
  int g = 0;
  std::vector<int> active;
  std::vector<std::vector<int>> covered;   // per UAV id
  std::vector<std::vector<double>> alpha;  // aligned with covered
  std::vector<std::vector<double>> dist;   // slant distance, aligned with covered
  std::vector<ModelParams> probe_update;   // one-step update per device from the global model
  std::vector<char> has_update;
};

struct UavRoundLog {
  int uav = -1;
  double beta = -1.0;  // -1 when no threshold applies
  int covered = 0;
  std::vector<int> selected;
  int h_star = 0;
  bool flagged = false;
  double battery_start = 0.0;
  double battery_end = 0.0;
  double energy_used = 0.0;  // drawn from this UAV's battery this round
};

struct MoveRecord {
  int uav = -1;
  int stage = 0;  // 0 rough, 1 precise
  double value = 0.0;
  double threshold = 0.0;
};

struct RoundLog {
  int g = 0;
  int k_g = 0;
  bool phi = false;
  int aggregator = -1;
  int next_aggregator = -1;
  double accuracy = 0.0;
  double loss = 0.0;
  double t_g = 0.0;
  double e_g = 0.0;
  int n_selected = 0;
  std::vector<int> dropouts;
  std::vector<UavRoundLog> uavs;
  CostBreakdown costs;
  int fixed_point_passes = 0;
  int coverage_before_drop = 0;
  int coverage_after_drop = 0;
  int coverage_after_redeploy = 0;
  std::vector<MoveRecord> moves;
  double move_distance = 0.0;
  std::vector<UavPos> uav_positions;        // after redeployment, indexed by UAV id
  std::vector<char> uav_active;             // after dropout removal
  std::vector<DevicePos> device_positions;  // after the mobility step
  bool converged = false;
  bool fleet_exhausted = false;
};

struct RunSummary {
  std::string run_id;
  std::string config_hash;
  std::string status;  // not-run | converged | max-rounds | fleet-exhausted
  int rounds = 0;
  double final_accuracy = 0.0;
  double final_loss = 0.0;
  double total_t = 0.0;
  double total_e = 0.0;
  int target_round = -1;          // first round reaching the target accuracy
  double cost_to_target = -1.0;   // cumulative lambda4*E + lambda5*T up to that round
  std::vector<std::pair<int, int>> dropout_timeline;  // (round, UAV id)
  std::vector<UavPos> initial_uavs;
  std::vector<DevicePos> initial_devices;
  std::vector<RoundLog> logs;
  double wall_clock_s = 0.0;  // not part of the deterministic outputs
};

NetworkState init_state(const RunConfig &cfg);

RoundContext build_context(const NetworkState &st, const RunConfig &cfg, int g);

// Collects the warmup transitions from the initial network before round 1.
void pretrain_agents(NetworkState &st, const RunConfig &cfg);

struct FixedPointResult {
  std::vector<UavSelection> selections;   // one per active UAV, id order
  std::vector<P1Solution> solutions;      // aligned with selections
  int passes = 0;                         // P1 solve sweeps performed
};

// Alternates P1 solves with the dwell-time feasibility filter until the selection is stable.
FixedPointResult p1_p2_fixed_point(const NetworkState &st, const RunConfig &cfg,
                                   const RoundContext &ctx,
                                   const std::vector<UavSelection> &initial);

// Deactivates flagged UAVs. Returns the ids actually removed.
std::vector<int> handle_dropout(NetworkState &st, const std::vector<int> &flagged);

// Global aggregation is due when a UAV raised the energy flag or k reached the period.
bool periodic_global_aggregation(int g, int k, int period, bool flag = false);

RoundLog run_global_round(NetworkState &st, const RunConfig &cfg);

RunSummary run(const RunConfig &cfg);

}  // namespace hflsim

#endif  // HFLSIM_ORCHESTRATOR_HPP_
