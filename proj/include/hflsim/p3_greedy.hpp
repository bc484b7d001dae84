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
#ifndef HFLSIM_P3_GREEDY_HPP_
#define HFLSIM_P3_GREEDY_HPP_

#include <functional>
#include <limits>
#include <vector>

#include "hflsim/cost_model.hpp"
#include "hflsim/net_model.hpp"

namespace hflsim {

struct SearchConfig {
  double d_set = 250.0;       // m per rough step
  double d_set_fine = 80.0;   // m per precise step
  int n_rough = 10;
  int n_fine = 16;
  double xi1 = 0.01;
  double xi2 = 0.01;
  int chi1 = 8;
  int chi2 = 6;
  double lambda8 = 1.0;
  double lambda9 = 1e-6;  // per joule of movement energy

  void validate() const;
};

struct MoveBenefit {
  double coverage_gain = 0.0;
  double energy_term = 0.0;
  double value = 0.0;
};

struct AggregatorChoice {
  int uav = -1;
  double distance_sum = 0.0;
};

// Benefit of a move after `attempt_b` accepted steps of length `step` (cfg.d_set when < 0).
MoveBenefit move_benefit(int cov_before, int cov_after, int attempt_b, const SearchConfig &cfg,
                         const UavProfile &uav, double step = -1.0);

// Number of devices the UAV would serve at a candidate position.
using CoverageFn = std::function<int(const UavPos &)>;

struct StageResult {
  UavPos pos;
  int probe_rounds = 0;
  int accepted = 0;
  double distance = 0.0;
  double move_energy = 0.0;
  std::vector<double> accepted_values;  // benefit of each accepted move
  std::vector<UavPos> path;             // position after each accepted move
};

struct StageParams {
  int directions = 10;
  double step = 250.0;
  double threshold = 0.01;
  int patience = 8;
};

// One greedy stage. `b_offset` counts moves already accepted earlier in the round;
// moves whose cumulative energy would exceed `energy_budget` are not taken.
StageResult search_stage(const UavPos &start, const CoverageFn &coverage, const StageParams &sp,
                         const SearchConfig &cfg, const UavProfile &uav, double field_size,
                         int b_offset = 0,
                         double energy_budget = std::numeric_limits<double>::infinity());

StageResult rough_search(const UavPos &start, const CoverageFn &coverage, const SearchConfig &cfg,
                         const UavProfile &uav, double field_size,
                         double energy_budget = std::numeric_limits<double>::infinity());
StageResult precise_search(const UavPos &start, const CoverageFn &coverage,
                           const SearchConfig &cfg, const UavProfile &uav, double field_size,
                           int b_offset = 0,
                           double energy_budget = std::numeric_limits<double>::infinity());

// argmin over active UAVs of the summed horizontal distance to the others; ties to lowest id.
AggregatorChoice elect_aggregator(const std::vector<UavPos> &positions,
                                  const std::vector<int> &active);

struct RedeployInput {
  std::vector<UavPos> positions;  // indexed by UAV id
  std::vector<int> active;        // ascending UAV ids
  std::vector<UavProfile> profiles;
  std::vector<double> energy_budget;  // per UAV id, J available for moving
  std::vector<DevicePos> devices;
  double radius = 0.0;
  double field_size = 0.0;
};

struct UavMoveLog {
  int uav = -1;
  StageResult rough;
  StageResult precise;
  RelocationCost relocation;  // movement part only (t_e2g = 0)
};

struct RedeployResult {
  std::vector<UavPos> positions;
  AggregatorChoice aggregator;
  std::vector<UavMoveLog> moves;  // one per active UAV, id order
  double total_energy = 0.0;
};

// Devices inside the disc at `pos` that no other active UAV covers.
int exclusive_coverage(const UavPos &pos, int self, const std::vector<UavPos> &positions,
                       const std::vector<int> &active, const std::vector<DevicePos> &devices,
                       double radius);
// Devices covered by at least one active UAV.
int union_coverage(const std::vector<UavPos> &positions, const std::vector<int> &active,
                   const std::vector<DevicePos> &devices, double radius);

// Sequential per-UAV rough then precise search, then aggregator election.
RedeployResult redeploy_and_select(const RedeployInput &in, const SearchConfig &cfg);

}  // namespace hflsim

#endif  // HFLSIM_P3_GREEDY_HPP_
