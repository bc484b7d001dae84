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
#include "hflsim/metrics_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace hflsim {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

std::string rounds_csv(const RunSummary &sum) {
  std::string out = kRoundsHeader;
  out += "\n";
  for (const auto &l : sum.logs) {
    out += std::to_string(l.g) + "," + std::to_string(l.k_g) + "," + (l.phi ? "1" : "0") + "," +
           std::to_string(l.aggregator) + "," + format_double(l.accuracy) + "," +
           format_double(l.loss) + "," + format_double(l.t_g) + "," + format_double(l.e_g) +
           "," + std::to_string(l.n_selected) + "," + std::to_string(l.dropouts.size()) + "\n";
  }
  return out;
}

std::string positions_csv(const RunSummary &sum) {
  std::string out = kPositionsHeader;
  out += "\n";
  auto emit = [&out](int g, const char *entity, size_t id, double x, double y) {
    out += std::to_string(g) + "," + entity + "," + std::to_string(id) + "," + format_double(x) +
           "," + format_double(y) + "\n";
  };
  if (!sum.initial_uavs.empty() || !sum.initial_devices.empty()) {
    for (size_t m = 0; m < sum.initial_uavs.size(); ++m) {
      emit(0, "uav", m, sum.initial_uavs[m].x, sum.initial_uavs[m].y);
    }
    for (size_t n = 0; n < sum.initial_devices.size(); ++n) {
      emit(0, "device", n, sum.initial_devices[n].x, sum.initial_devices[n].y);
    }
  }
  for (const auto &l : sum.logs) {
    for (size_t m = 0; m < l.uav_positions.size(); ++m) {
      if (m < l.uav_active.size() && !l.uav_active[m]) continue;
      emit(l.g, "uav", m, l.uav_positions[m].x, l.uav_positions[m].y);
    }
    for (size_t n = 0; n < l.device_positions.size(); ++n) {
      emit(l.g, "device", n, l.device_positions[n].x, l.device_positions[n].y);
    }
  }
  return out;
}

std::string summary_json(const RunSummary &sum, const RunConfig &cfg) {
  ordered_json j;
  j["run_id"] = sum.run_id;
  j["config_hash"] = sum.config_hash;
  j["scenario"] = cfg.scenario;
  j["seed"] = cfg.seed;
  j["selection"] = cfg.orchestrator.selection;
  j["redeploy"] = cfg.orchestrator.redeploy;
  j["status"] = sum.status;
  j["rounds"] = sum.rounds;
  j["final_accuracy"] = sum.final_accuracy;
  j["final_loss"] = sum.final_loss;
  j["total_T_s"] = sum.total_t;
  j["total_E_J"] = sum.total_e;
  j["target_accuracy"] = cfg.orchestrator.target_accuracy;
  j["target_round"] = sum.target_round;
  j["cost_to_target"] = sum.cost_to_target;
  ordered_json drops = ordered_json::array();
  for (const auto &[g, m] : sum.dropout_timeline) drops.push_back({{"g", g}, {"uav", m}});
  j["dropout_timeline"] = drops;
  ordered_json rounds = ordered_json::array();
  for (const auto &l : sum.logs) {
    ordered_json r;
    r["g"] = l.g;
    r["K_g"] = l.k_g;
    r["phi"] = l.phi;
    r["aggregator"] = l.aggregator;
    r["next_aggregator"] = l.next_aggregator;
    r["accuracy"] = l.accuracy;
    r["loss"] = l.loss;
    r["T_g_s"] = l.t_g;
    r["E_g_J"] = l.e_g;
    r["T_broad_s"] = l.costs.broadcast.t_broad;
    r["E_broad_J"] = l.costs.broadcast.e_broad;
    r["E_bwait_J"] = l.costs.broadcast.e_bwait;
    r["n_selected"] = l.n_selected;
    r["dropouts"] = l.dropouts;
    r["coverage"] = {{"before_drop", l.coverage_before_drop},
                     {"after_drop", l.coverage_after_drop},
                     {"after_redeploy", l.coverage_after_redeploy}};
    r["move_distance_m"] = l.move_distance;
    ordered_json moves = ordered_json::array();
    for (const auto &mv : l.moves) {
      moves.push_back({{"uav", mv.uav},
                       {"stage", mv.stage == 0 ? "rough" : "precise"},
                       {"benefit", mv.value},
                       {"threshold", mv.threshold}});
    }
    r["moves"] = moves;
    ordered_json uavs = ordered_json::array();
    for (size_t i = 0; i < l.uavs.size(); ++i) {
      const auto &u = l.uavs[i];
      const auto &c = l.costs.uavs[i];
      ordered_json ju;
      ju["uav"] = u.uav;
      ju["beta"] = u.beta;
      ju["covered"] = u.covered;
      ju["selected"] = u.selected.size();
      ju["H"] = u.h_star;
      ju["flagged"] = u.flagged;
      ju["battery_start_J"] = u.battery_start;
      ju["battery_end_J"] = u.battery_end;
      ju["T_edge_s"] = c.parts.t_edge;
      ju["E_edge_J"] = c.parts.e_edge;
      ju["T_delay_s"] = c.parts.t_delay;
      ju["E_delay_J"] = c.parts.e_delay;
      uavs.push_back(ju);
    }
    r["uavs"] = uavs;
    rounds.push_back(r);
  }
  j["per_round"] = rounds;
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T parse_num(const std::string &s) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("rounds.csv: bad number '" + s + "'");
  }
  return v;
}

void write_file(const std::filesystem::path &p, const std::string &text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

std::vector<RoundsRow> parse_rounds_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRoundsHeader) {
    throw std::runtime_error("rounds.csv: unexpected header");
  }
  std::vector<RoundsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != 10) throw std::runtime_error("rounds.csv: expected 10 fields");
    RoundsRow r;
    r.g = parse_num<int>(f[0]);
    r.k_g = parse_num<int>(f[1]);
    r.phi = parse_num<int>(f[2]);
    r.aggregator = parse_num<int>(f[3]);
    r.accuracy = parse_num<double>(f[4]);
    r.loss = parse_num<double>(f[5]);
    r.t_g = parse_num<double>(f[6]);
    r.e_g = parse_num<double>(f[7]);
    r.n_selected = parse_num<int>(f[8]);
    r.dropouts = parse_num<int>(f[9]);
    rows.push_back(r);
  }
  return rows;
}

void export_metrics(const RunSummary &sum, const RunConfig &cfg, const std::string &dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  fs::path base(dir);
  write_file(base / "rounds.csv", rounds_csv(sum));
  write_file(base / "summary.json", summary_json(sum, cfg));
  write_file(base / "positions.csv", positions_csv(sum));
  nlohmann::ordered_json t;
  t["run_id"] = sum.run_id;
  t["wall_clock_s"] = sum.wall_clock_s;
  write_file(base / "timing.json", t.dump(2) + "\n");
}

}  // namespace hflsim
