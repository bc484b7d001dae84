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
#ifndef HFLSIM_P1_ALM_HPP_
#define HFLSIM_P1_ALM_HPP_

#include <functional>
#include <vector>

#include "hflsim/cost_model.hpp"
#include "hflsim/net_model.hpp"

namespace hflsim {

// Per selected device constants of the local-iteration / bandwidth problem.
struct P1Device {
  double a_d2u = 0.0;      // lambda4 * I_n * p_n
  double cal_a_d2u = 0.0;  // p_n d^-alpha / N0
  double a_u2d = 0.0;      // lambda4 * I_m * p_u2d
  double cal_a_u2d = 0.0;  // p_u2d d^-alpha / N0
  double u_d2u = 0.0;      // (lambda4 p_hover + lambda5) * I_n * p_n
  double u_u2d = 0.0;      // (lambda4 p_hover + lambda5) * I_m * p_u2d
  double z = 0.0;          // (lambda4 p_hover + lambda5) * (|D| phi c / f + t_fix)
  double c_coef = 0.0;     // lambda4 f^2 phi c |D| theta / 2
};

struct P1Instance {
  std::vector<P1Device> devices;
  double b_d2u_total = 0.0;
  double b_u2d_total = 0.0;
  double lambda4 = 0.5;
  double lambda5 = 0.5;
  int n_star = 0;  // argmax z

  void validate() const;
};

struct P1Config {
  double sigma0 = 1.0;
  double upsilon0 = 0.0;
  double zeta1 = 0.1;
  double zeta2 = 0.9;
  double rho = 4.0;
  double eta_hat = 0.002;
  double h0 = 5.0;
  int inner_cap = 10000;
  int outer_cap = 50;
  // Absolute accuracy floors applied on top of the kappa/epsilon schedules.
  double kappa_floor = 1e-7;
  double eps_final = 1e-7;
  // Violation must shrink by this factor per multiplier step, else the penalty grows.
  double progress_ratio = 0.5;

  void validate() const;
};

// Multipliers are kept per device (one inequality g_n <= Y per selected device).
struct AlmState {
  std::vector<double> upsilon;
  double sigma = 1.0;
  double kappa = 1.0;
  double epsilon = 1.0;
  int j = 0;
  double zeta1 = 0.1;
  double zeta2 = 0.9;
  double rho = 4.0;
};

struct P1Solution {
  int h_star = 1;
  std::vector<double> b_d2u;
  std::vector<double> b_u2d;
  double objective_value = 0.0;
  double h_relaxed = 1.0;
  int outer_iterations = 0;
  int inner_steps = 0;
  bool warning = false;  // an inner solve hit its cap
};

P1Instance build_instance(const std::vector<DeviceProfile> &profiles,
                          const std::vector<double> &distances, const UavProfile &uav,
                          const ChannelParams &channel, double lambda4, double lambda5);

double objective(const P1Instance &inst, double h, const std::vector<double> &b_d2u,
                 const std::vector<double> &b_u2d);

// Closed-form slack exactly as stated for the single-constraint reduction.
double slack_closed_form(double upsilon, double sigma, double g_val);

double violation_psi(double upsilon, double sigma, double g_val);
// Aggregate violation over several constraints (Euclidean norm of the per-constraint terms).
double violation_psi(const AlmState &state, const std::vector<double> &g_vals);

AlmState init_state(const P1Config &cfg, size_t n_constraints);

// Case 1 (violation_ok): multiplier step, kappa/epsilon tightening schedule.
// Case 2: penalty growth with multipliers frozen.
AlmState outer_update(const AlmState &state, const std::vector<double> &g_vals,
                      bool violation_ok);

// Generic projected gradient descent used by the inner solve.
struct InnerProblem {
  // Returns the value and writes the gradient.
  std::function<double(const std::vector<double> &, std::vector<double> &)> eval;
  std::function<void(std::vector<double> &)> project;
};

struct InnerResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;  // projected-gradient norm at x
  int steps = 0;
  bool hit_cap = false;
};

InnerResult projected_gradient(const InnerProblem &prob, const std::vector<double> &start,
                               double step, double tol, int max_steps);

// Point layout: [h, s_d2u (N), s_u2d (N)] with s the budget fractions.
std::vector<double> start_point(const P1Instance &inst, const P1Config &cfg);

// Minimises the reduced augmented Lagrangian at fixed multipliers and penalty.
InnerResult inner_minimize(const P1Instance &inst, const AlmState &state,
                           const std::vector<double> &start, const P1Config &cfg);

P1Solution solve(const P1Instance &inst, const P1Config &cfg = {});

// Exhaustive search over integer h in [h_lo, h_hi] and budget splits on a 1/grid_points lattice.
P1Solution brute_force_oracle(const P1Instance &inst, int h_lo, int h_hi, int grid_points);

// Projection onto {s : sum s = 1, s_i >= floor}.
void project_simplex(double *s, size_t n, double floor);

}  // namespace hflsim

#endif  // HFLSIM_P1_ALM_HPP_
