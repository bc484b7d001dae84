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
// Command-line driver: config ingestion, scenario presets, metrics export.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hflsim/config.hpp"
#include "hflsim/metrics_io.hpp"
#include "hflsim/orchestrator.hpp"
#include "hflsim/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void apply_strategy(hflsim::RunConfig &cfg, const std::string &strategy) {
  const std::string fixed = "fixed=";
  if (strategy.rfind(fixed, 0) == 0) {
    cfg.orchestrator.selection = "fixed";
    try {
      cfg.orchestrator.fixed_beta = std::stod(strategy.substr(fixed.size()));
    } catch (const std::exception &) {
      throw hflsim::ConfigError("--strategy", "bad threshold in '" + strategy + "'");
    }
  } else if (strategy == "greedy" || strategy == "direct-drop") {
    cfg.orchestrator.redeploy = strategy;
  } else {
    cfg.orchestrator.selection = strategy;
  }
  cfg.validate();
}

void report(const std::string &label, const hflsim::RunSummary &s) {
  std::printf("%-16s status=%s rounds=%d accuracy=%.4f T=%.3fs E=%.1fJ dropouts=%zu\n",
              label.c_str(), s.status.c_str(), s.rounds, s.final_accuracy, s.total_t, s.total_e,
              s.dropout_timeline.size());
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hierarchical federated learning simulator for UAV-assisted edge networks"};
  std::string config_path;
  std::string scenario;
  std::string out_dir;
  std::string strategy;
  uint64_t seed = 0;
  int max_rounds = -1;
  int dropouts = 1;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON config merged over the defaults");
  app.add_option("--scenario", scenario,
                 "baseline-compare | threshold-sweep | dropout | mobility-sweep");
  auto *seed_opt = app.add_option("--seed", seed, "Global seed (overrides the config)");
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--strategy", strategy,
                 "Selection strategy (adaptive, random, distance-only, similarity-only, "
                 "fixed=<beta>) or redeploy strategy (greedy, direct-drop)");
  app.add_option("--max-rounds", max_rounds, "Cap on global rounds")->check(CLI::NonNegativeNumber);
  app.add_option("--dropouts", dropouts, "Scripted dropouts in the dropout scenario")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Suppress the per-run report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  hflsim::RunConfig cfg;
  try {
    cfg = config_path.empty() ? hflsim::parse_config_text("") : hflsim::parse_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (max_rounds >= 0) cfg.orchestrator.max_rounds = max_rounds;
    if (!strategy.empty()) apply_strategy(cfg, strategy);
    if (!scenario.empty()) {
      if (!hflsim::is_scenario(scenario)) {
        throw hflsim::ConfigError("--scenario", "unknown scenario '" + scenario + "'");
      }
      cfg.scenario = scenario;
      hflsim::scenario_arms(scenario, cfg, dropouts);  // validate every arm up front
    }
    cfg.validate();
  } catch (const hflsim::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (scenario.empty()) {
      hflsim::RunSummary s = hflsim::run(cfg);
      hflsim::export_metrics(s, cfg, cfg.out_dir);
      if (!quiet) report("run", s);
    } else {
      auto arms = hflsim::run_scenario(scenario, cfg, cfg.out_dir, dropouts);
      if (!quiet) {
        for (const auto &a : arms) report(a.label, a.summary);
      }
    }
  } catch (const std::exception &e) {
    std::cerr << "runtime fault: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
