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
#include "hflsim/scenarios.hpp"

#include <filesystem>

#include "hflsim/metrics_io.hpp"

namespace hflsim {

std::vector<std::string> scenario_names() {
  return {"baseline-compare", "threshold-sweep", "dropout", "mobility-sweep"};
}

bool is_scenario(const std::string &name) {
  for (const auto &s : scenario_names()) {
    if (s == name) return true;
  }
  return false;
}

std::vector<int> dropout_victims(int n_uavs, int count) {
  std::vector<int> out;
  for (int m : {1, 3, 0, 2, 4}) {
    if (static_cast<int>(out.size()) >= count) break;
    if (m < n_uavs) out.push_back(m);
  }
  return out;
}

std::vector<Arm> scenario_arms(const std::string &name, const RunConfig &base,
                               int dropout_count) {
  std::vector<Arm> arms;
  auto arm = [&](const std::string &label) -> RunConfig & {
    arms.push_back({label, base});
    arms.back().cfg.scenario = name;
    return arms.back().cfg;
  };
  if (name == "baseline-compare") {
    for (const char *s : {"adaptive", "random", "distance-only", "similarity-only"}) {
      arm(s).orchestrator.selection = s;
    }
  } else if (name == "threshold-sweep") {
    arm("adaptive").orchestrator.selection = "adaptive";
    for (auto [label, beta] : {std::pair{"fixed-0.40", 0.40}, std::pair{"fixed-0.55", 0.55},
                               std::pair{"fixed-0.70", 0.70}, std::pair{"fixed-0.85", 0.85}}) {
      RunConfig &c = arm(label);
      c.orchestrator.selection = "fixed";
      c.orchestrator.fixed_beta = beta;
    }
  } else if (name == "dropout") {
    if (dropout_count < 1 || dropout_count >= base.net.n_uavs) {
      throw ConfigError("dropouts", "must be >= 1 and leave at least one UAV");
    }
    for (const char *r : {"greedy", "direct-drop"}) {
      RunConfig &c = arm(r);
      c.orchestrator.redeploy = r;
      c.uav.batteries.assign(base.net.n_uavs, base.uav.battery);
      for (int m : dropout_victims(base.net.n_uavs, dropout_count)) {
        c.uav.batteries[m] = kScriptedDropoutBattery;
      }
    }
  } else if (name == "mobility-sweep") {
    for (auto [label, xi] : {std::pair{"xi-0.1", 0.1}, std::pair{"xi-0.3", 0.3},
                             std::pair{"xi-0.5", 0.5}, std::pair{"xi-0.7", 0.7}}) {
      arm(label).net.xi = xi;
    }
  } else {
    throw ConfigError("scenario", "unknown scenario '" + name + "'");
  }
  for (auto &a : arms) a.cfg.validate();
  return arms;
}

std::vector<ArmResult> run_scenario(const std::string &name, const RunConfig &base,
                                    const std::string &out_dir, int dropout_count) {
  std::vector<ArmResult> out;
  for (auto &a : scenario_arms(name, base, dropout_count)) {
    ArmResult r{a.label, a.cfg, run(a.cfg)};
    if (!out_dir.empty()) {
      export_metrics(r.summary, r.cfg, (std::filesystem::path(out_dir) / a.label).string());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace hflsim
