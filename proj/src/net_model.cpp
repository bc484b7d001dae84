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
#include "hflsim/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hflsim/rng.hpp"

namespace hflsim {

void ChannelParams::validate() const {
  if (!(alpha_d2u > 0 && alpha_u2d > 0 && alpha_u2u > 0)) {
    throw std::invalid_argument("path-loss exponents must be positive");
  }
  if (!(n0 > 0)) throw std::invalid_argument("noise density must be positive");
}

double dbm_per_hz_to_watt(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double distance(const DevicePos &device, const UavPos &uav) {
  double dx = device.x - uav.x;
  double dy = device.y - uav.y;
  return std::sqrt(dx * dx + dy * dy + uav.altitude * uav.altitude);
}

double horizontal_distance(const DevicePos &device, const UavPos &uav) {
  return std::hypot(device.x - uav.x, device.y - uav.y);
}

double horizontal_distance(const UavPos &a, const UavPos &b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double uav_link_distance(const UavPos &a, const UavPos &b) {
  double dz = a.altitude - b.altitude;
  double d = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + dz * dz);
  return std::max(d, 1.0);
}

double link_rate(double bandwidth, double tx_power, double dist, double alpha, double n0) {
  if (!(dist > 0)) throw std::domain_error("link_rate: distance must be positive");
  if (bandwidth < 0) throw std::domain_error("link_rate: negative bandwidth");
  if (bandwidth == 0.0 || tx_power == 0.0) return 0.0;
  double snr = tx_power * std::pow(dist, -alpha) / (n0 * bandwidth);
  return bandwidth * std::log1p(snr) / std::numbers::ln2;
}

std::vector<int> coverage_set(const UavPos &uav, const std::vector<DevicePos> &devices,
                              double radius) {
  std::vector<int> out;
  for (size_t i = 0; i < devices.size(); ++i) {
    if (horizontal_distance(devices[i], uav) <= radius) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<UavPos> grid_uav_positions(int n, double field_size, double altitude) {
  std::vector<UavPos> out;
  if (n <= 0) return out;
  int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  int rows = (n + cols - 1) / cols;
  double cw = field_size / cols;
  double rh = field_size / rows;
  for (int i = 0; i < n; ++i) {
    int r = i / cols;
    int c = i % cols;
    out.push_back({(c + 0.5) * cw, (r + 0.5) * rh, altitude});
  }
  return out;
}

bool in_field(double x, double y, double field_size) {
  return x >= 0.0 && y >= 0.0 && x <= field_size && y <= field_size;
}

namespace {

DevicePos sample_in_disc(Rng &rng, const UavPos &c, double radius, double field_size) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double r = radius * std::sqrt(rng.uniform());
    double t = 2.0 * std::numbers::pi * rng.uniform();
    double x = c.x + r * std::cos(t);
    double y = c.y + r * std::sin(t);
    if (in_field(x, y, field_size)) return {x, y};
  }
  return {std::clamp(c.x, 0.0, field_size), std::clamp(c.y, 0.0, field_size)};
}

size_t nearest_uav(const DevicePos &d, const std::vector<UavPos> &uavs) {
  size_t best = 0;
  double best_d = horizontal_distance(d, uavs[0]);
  for (size_t m = 1; m < uavs.size(); ++m) {
    double dm = horizontal_distance(d, uavs[m]);
    if (dm < best_d) {
      best_d = dm;
      best = m;
    }
  }
  return best;
}

}  // namespace

std::vector<DevicePos> place_devices(int n, const std::vector<UavPos> &uavs, double radius,
                                     double field_size, uint64_t seed) {
  std::vector<DevicePos> out;
  if (uavs.empty()) throw std::invalid_argument("place_devices: no UAVs");
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, "placement", static_cast<uint64_t>(i));
    DevicePos p{};
    bool placed = false;
    for (int attempt = 0; attempt < 100000 && !placed; ++attempt) {
      p = {rng.uniform(0.0, field_size), rng.uniform(0.0, field_size)};
      for (const auto &u : uavs) {
        if (horizontal_distance(p, u) <= radius) {
          placed = true;
          break;
        }
      }
    }
    if (!placed) p = sample_in_disc(rng, uavs[rng.below(uavs.size())], radius, field_size);
    out.push_back(p);
  }
  return out;
}

std::vector<DevicePos> move_devices(const std::vector<DevicePos> &positions,
                                    const std::vector<UavPos> &active_uavs, double radius,
                                    double field_size, const MobilityModel &mobility,
                                    uint64_t round) {
  if (mobility.xi < 0.0 || mobility.xi > 1.0) {
    throw std::invalid_argument("move_devices: xi outside [0,1]");
  }
  std::vector<DevicePos> out = positions;
  if (active_uavs.empty()) return out;
  for (size_t n = 0; n < positions.size(); ++n) {
    Rng rng = Rng::stream(mobility.seed, "mobility", n, round);
    if (!rng.bernoulli(mobility.xi)) continue;
    size_t dest = 0;
    if (active_uavs.size() >= 2) {
      size_t here = nearest_uav(positions[n], active_uavs);
      dest = rng.below(active_uavs.size() - 1);
      if (dest >= here) ++dest;
    }
    out[n] = sample_in_disc(rng, active_uavs[dest], radius, field_size);
  }
  return out;
}

}  // namespace hflsim
