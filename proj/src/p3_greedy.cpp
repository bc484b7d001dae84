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
#include "hflsim/p3_greedy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hflsim {

void SearchConfig::validate() const {
  if (!(d_set > 0) || !(d_set_fine > 0) || !(d_set_fine < d_set)) {
    throw std::invalid_argument("search steps must satisfy 0 < fine step < rough step");
  }
  if (n_rough < 2 || n_fine < 2) throw std::invalid_argument("need at least two directions");
  if (chi1 < 0 || chi2 < 0) throw std::invalid_argument("patience must be non-negative");
  for (double l : {lambda8, lambda9}) {
    if (l < 0 || l > 1) throw std::invalid_argument("benefit weights must lie in [0,1]");
  }
}

MoveBenefit move_benefit(int cov_before, int cov_after, int attempt_b, const SearchConfig &cfg,
                         const UavProfile &uav, double step) {
  if (step < 0) step = cfg.d_set;
  if (!(uav.speed > 0)) throw std::invalid_argument("move_benefit: speed must be positive");
  MoveBenefit mb;
  mb.coverage_gain = cov_before > 0
                         ? static_cast<double>(cov_after) / static_cast<double>(cov_before) - 1.0
                         : static_cast<double>(cov_after);
  mb.energy_term = static_cast<double>(attempt_b) * step / uav.speed * uav.p_move;
  mb.value = cfg.lambda8 * mb.coverage_gain - cfg.lambda9 * mb.energy_term;
  return mb;
}

StageResult search_stage(const UavPos &start, const CoverageFn &coverage, const StageParams &sp,
                         const SearchConfig &cfg, const UavProfile &uav, double field_size,
                         int b_offset, double energy_budget) {
  StageResult res;
  res.pos = start;
  if (!(sp.step > 0) || sp.directions < 1) return res;
  int low = 0;
  while (low < sp.patience) {
    ++res.probe_rounds;
    int cov0 = coverage(res.pos);
    int best_dir = -1;
    double best_value = 0.0;
    UavPos best_pos;
    for (int d = 0; d < sp.directions; ++d) {
      double ang = 2.0 * std::numbers::pi * d / sp.directions;
      UavPos cand{res.pos.x + sp.step * std::cos(ang), res.pos.y + sp.step * std::sin(ang),
                  res.pos.altitude};
      if (!in_field(cand.x, cand.y, field_size)) continue;
      MoveBenefit mb =
          move_benefit(cov0, coverage(cand), b_offset + res.accepted + 1, cfg, uav, sp.step);
      if (best_dir < 0 || mb.value > best_value) {
        best_dir = d;
        best_value = mb.value;
        best_pos = cand;
      }
    }
    bool take = best_dir >= 0 && best_value > sp.threshold && best_value > 0;
    if (take) {
      double e = relocation_costs(res.pos, best_pos, uav, 0.0).move_energy;
      if (res.move_energy + e > energy_budget) take = false;
      if (take) {
        res.pos = best_pos;
        res.move_energy += e;
        res.distance += sp.step;
        ++res.accepted;
        res.accepted_values.push_back(best_value);
        res.path.push_back(best_pos);
        low = 0;
        continue;
      }
    }
    ++low;
  }
  return res;
}

StageResult rough_search(const UavPos &start, const CoverageFn &coverage, const SearchConfig &cfg,
                         const UavProfile &uav, double field_size, double energy_budget) {
  StageParams sp{cfg.n_rough, cfg.d_set, cfg.xi1, cfg.chi1};
  return search_stage(start, coverage, sp, cfg, uav, field_size, 0, energy_budget);
}

StageResult precise_search(const UavPos &start, const CoverageFn &coverage,
                           const SearchConfig &cfg, const UavProfile &uav, double field_size,
                           int b_offset, double energy_budget) {
  StageParams sp{cfg.n_fine, cfg.d_set_fine, cfg.xi2, cfg.chi2};
  return search_stage(start, coverage, sp, cfg, uav, field_size, b_offset, energy_budget);
}

AggregatorChoice elect_aggregator(const std::vector<UavPos> &positions,
                                  const std::vector<int> &active) {
  if (active.empty()) throw std::invalid_argument("elect_aggregator: no active UAV");
  AggregatorChoice best;
  for (int m : active) {
    double sum = 0.0;
    for (int o : active) {
      if (o != m) sum += horizontal_distance(positions.at(m), positions.at(o));
    }
    if (best.uav < 0 || sum < best.distance_sum ||
        (sum == best.distance_sum && m < best.uav)) {
      best.uav = m;
      best.distance_sum = sum;
    }
  }
  return best;
}

int exclusive_coverage(const UavPos &pos, int self, const std::vector<UavPos> &positions,
                       const std::vector<int> &active, const std::vector<DevicePos> &devices,
                       double radius) {
  int count = 0;
  for (const auto &d : devices) {
    if (horizontal_distance(d, pos) > radius) continue;
    bool other = false;
    for (int o : active) {
      if (o != self && horizontal_distance(d, positions[o]) <= radius) {
        other = true;
        break;
      }
    }
    if (!other) ++count;
  }
  return count;
}

int union_coverage(const std::vector<UavPos> &positions, const std::vector<int> &active,
                   const std::vector<DevicePos> &devices, double radius) {
  int count = 0;
  for (const auto &d : devices) {
    for (int m : active) {
      if (horizontal_distance(d, positions[m]) <= radius) {
        ++count;
        break;
      }
    }
  }
  return count;
}

RedeployResult redeploy_and_select(const RedeployInput &in, const SearchConfig &cfg) {
  cfg.validate();
  RedeployResult out;
  out.positions = in.positions;
  for (int m : in.active) {
    CoverageFn cov = [&, m](const UavPos &p) {
      return exclusive_coverage(p, m, out.positions, in.active, in.devices, in.radius);
    };
    double budget = in.energy_budget.empty() ? std::numeric_limits<double>::infinity()
                                             : in.energy_budget.at(m);
    const UavProfile &prof = in.profiles.at(m);
    UavMoveLog log;
    log.uav = m;
    UavPos start = out.positions[m];
    log.rough = rough_search(start, cov, cfg, prof, in.field_size, budget);
    log.precise = precise_search(log.rough.pos, cov, cfg, prof, in.field_size,
                                 0, budget - log.rough.move_energy);
    out.positions[m] = log.precise.pos;
    log.relocation.distance = log.rough.distance + log.precise.distance;
    log.relocation.move_time = log.relocation.distance / prof.speed;
    log.relocation.move_energy = log.rough.move_energy + log.precise.move_energy;
    log.relocation.t_delay = log.relocation.move_time;
    log.relocation.e_delay = log.relocation.move_energy;
    out.total_energy += log.relocation.move_energy;
    out.moves.push_back(std::move(log));
  }
  out.aggregator = elect_aggregator(out.positions, in.active);
  return out;
}

}  // namespace hflsim
