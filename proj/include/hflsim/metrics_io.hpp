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
#ifndef HFLSIM_METRICS_IO_HPP_
#define HFLSIM_METRICS_IO_HPP_

#include <string>
#include <vector>

#include "hflsim/config.hpp"
#include "hflsim/orchestrator.hpp"

namespace hflsim {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

inline constexpr const char *kRoundsHeader =
    "g,K_g,phi,aggregator,accuracy,loss,T_g_s,E_g_J,n_selected,dropouts";
inline constexpr const char *kPositionsHeader = "g,entity,id,x,y";

std::string rounds_csv(const RunSummary &sum);
// Round 0 holds the initial layout; round g holds the layout after round g.
std::string positions_csv(const RunSummary &sum);
std::string summary_json(const RunSummary &sum, const RunConfig &cfg);

struct RoundsRow {
  int g = 0;
  int k_g = 0;
  int phi = 0;
  int aggregator = -1;
  double accuracy = 0.0;
  double loss = 0.0;
  double t_g = 0.0;
  double e_g = 0.0;
  int n_selected = 0;
  int dropouts = 0;
};
// Parses rounds.csv text; throws std::runtime_error on a malformed header or row.
std::vector<RoundsRow> parse_rounds_csv(const std::string &text);

// Writes rounds.csv, summary.json, positions.csv and timing.json into `dir` (created if
// missing). Throws std::runtime_error when the directory is not writable.
void export_metrics(const RunSummary &sum, const RunConfig &cfg, const std::string &dir);

}  // namespace hflsim

#endif  // HFLSIM_METRICS_IO_HPP_
