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
#ifndef HFLSIM_SCENARIOS_HPP_
#define HFLSIM_SCENARIOS_HPP_

#include <string>
#include <vector>

#include "hflsim/config.hpp"
#include "hflsim/orchestrator.hpp"

namespace hflsim {

inline constexpr double kScriptedDropoutBattery = 25.0;  // J, exhausted within the first round

struct Arm {
  std::string label;
  RunConfig cfg;
};

struct ArmResult {
  std::string label;
  RunConfig cfg;
  RunSummary summary;
};

bool is_scenario(const std::string &name);
std::vector<std::string> scenario_names();

// UAV ids given the scripted battery in the dropout scenario.
std::vector<int> dropout_victims(int n_uavs, int count);

// Arms of a scenario derived from `base`. Throws ConfigError for an unknown name.
std::vector<Arm> scenario_arms(const std::string &name, const RunConfig &base,
                               int dropout_count = 1);

// Runs every arm; when `out_dir` is non-empty each arm writes into out_dir/<label>.
std::vector<ArmResult> run_scenario(const std::string &name, const RunConfig &base,
                                    const std::string &out_dir, int dropout_count = 1);

}  // namespace hflsim

#endif  // HFLSIM_SCENARIOS_HPP_
