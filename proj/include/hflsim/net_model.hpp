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
#ifndef HFLSIM_NET_MODEL_HPP_
#define HFLSIM_NET_MODEL_HPP_

#include <cstdint>
#include <vector>

namespace hflsim {

struct DevicePos {
  double x = 0.0;
  double y = 0.0;
};

struct UavPos {
  double x = 0.0;
  double y = 0.0;
  double altitude = 0.0;
};

struct ChannelParams {
  double alpha_d2u = 3.0;
  double alpha_u2d = 3.0;
  double alpha_u2u = 2.0;
  double n0 = 3.981071705534972e-21;  // -174 dBm/Hz in W/Hz

  void validate() const;
};

double dbm_per_hz_to_watt(double dbm);

struct MobilityModel {
  double xi = 0.3;
  uint64_t seed = 0;
};

// 3D slant distance between a ground device and a UAV.
double distance(const DevicePos &device, const UavPos &uav);
double horizontal_distance(const DevicePos &device, const UavPos &uav);
double horizontal_distance(const UavPos &a, const UavPos &b);
// UAV-to-UAV link distance, floored at 1 m so co-located UAVs keep a finite rate.
double uav_link_distance(const UavPos &a, const UavPos &b);

// Shannon rate B log2(1 + p d^-alpha / (N0 B)). Throws std::domain_error for dist <= 0.
double link_rate(double bandwidth, double tx_power, double dist, double alpha, double n0);

// Ids (indices) of devices within horizontal distance <= radius.
std::vector<int> coverage_set(const UavPos &uav, const std::vector<DevicePos> &devices,
                              double radius);

// Regular grid of n UAVs over a square field, row-major cell centres.
std::vector<UavPos> grid_uav_positions(int n, double field_size, double altitude);

// Uniform placement over the union of the UAV coverage discs (clipped to the field).
std::vector<DevicePos> place_devices(int n, const std::vector<UavPos> &uavs, double radius,
                                     double field_size, uint64_t seed);

// One round boundary of device mobility. Each device moves with probability xi to a uniform
// point of a uniformly chosen disc other than its nearest UAV's. `round` keys the per-device
// stream so calls are order independent.
std::vector<DevicePos> move_devices(const std::vector<DevicePos> &positions,
                                    const std::vector<UavPos> &active_uavs, double radius,
                                    double field_size, const MobilityModel &mobility,
                                    uint64_t round);

bool in_field(double x, double y, double field_size);

}  // namespace hflsim

#endif  // HFLSIM_NET_MODEL_HPP_
