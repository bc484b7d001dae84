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
#include "hflsim/p1_alm.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hflsim/rng.hpp"

namespace hflsim {
namespace {

P1Instance random_instance(uint64_t seed, int n) {
  Rng r = Rng::stream(seed, "p1-test-instance");
  std::vector<DeviceProfile> ps;
  std::vector<double> ds;
  for (int i = 0; i < n; ++i) {
    DeviceProfile p;
    p.f = r.uniform(1e9, 1e10);
    p.c = r.uniform(30, 100) * 6272;
    p.phi = r.uniform(0.1, 1);
    p.dataset_size = r.uniform(50, 500);
    p.t_fix = r.uniform(0, 0.1);
    p.p_d2u = r.uniform(0.2, 0.8);
    p.i_d2u = 698880;
    ps.push_back(p);
    ds.push_back(r.uniform(150, 5000));
  }
  UavProfile u;
  u.p_u2d = r.uniform(0.3, 1.2);
  u.b_d2u_total = r.uniform(20e6, 100e6);
  u.b_u2d_total = r.uniform(20e6, 100e6);
  u.i_u2d = 698880;
  return build_instance(ps, ds, u, ChannelParams{}, 0.5, 0.5);
}

// Independent extended-precision evaluation of the weighted round cost.
long double objective_ld(const P1Instance &inst, long double h, const std::vector<double> &bd,
                         const std::vector<double> &bu) {
  auto rate = [](long double b, long double a) { return b * std::log2(1.0L + a / b); };
  long double sum = 0, worst = -1;
  for (size_t n = 0; n < inst.devices.size(); ++n) {
    const P1Device &d = inst.devices[n];
    long double rd = rate(bd[n], d.cal_a_d2u), ru = rate(bu[n], d.cal_a_u2d);
    sum += d.a_d2u / rd + d.a_u2d / ru + h * d.c_coef;
    worst = std::max(worst, d.u_d2u / rd + d.u_u2d / ru + h * d.z);
  }
  return sum + worst;
}

TEST(BuildInstance, UnitSubstitution) {
  DeviceProfile p;
  p.f = 1;
  p.c = 1;
  p.phi = 1;
  p.theta = 1;
  p.t_fix = 1;
  p.p_d2u = 1;
  p.dataset_size = 1;
  p.i_d2u = 1;
  UavProfile u;
  u.p_hover = 1;
  u.p_u2d = 1;
  u.i_u2d = 1;
  ChannelParams ch;
  ch.n0 = 1;
  P1Instance inst = build_instance({p}, {1.0}, u, ch, 1.0, 1.0);
  const P1Device &d = inst.devices[0];
  EXPECT_DOUBLE_EQ(d.a_d2u, 1.0);
  EXPECT_DOUBLE_EQ(d.cal_a_d2u, 1.0);
  EXPECT_DOUBLE_EQ(d.a_u2d, 1.0);
  EXPECT_DOUBLE_EQ(d.cal_a_u2d, 1.0);
  EXPECT_DOUBLE_EQ(d.u_d2u, 2.0);
  EXPECT_DOUBLE_EQ(d.u_u2d, 2.0);
  EXPECT_DOUBLE_EQ(d.z, 4.0);
  EXPECT_DOUBLE_EQ(d.c_coef, 0.5);
}

TEST(BuildInstance, ZeroEnergyWeight) {
  DeviceProfile p;
  UavProfile u;
  P1Instance inst = build_instance({p}, {500.0}, u, ChannelParams{}, 0.0, 0.5);
  const P1Device &d = inst.devices[0];
  EXPECT_EQ(d.a_d2u, 0.0);
  EXPECT_EQ(d.a_u2d, 0.0);
  EXPECT_EQ(d.c_coef, 0.0);
  EXPECT_DOUBLE_EQ(d.u_d2u, 0.5 * p.i_d2u * p.p_d2u);
  EXPECT_DOUBLE_EQ(d.z, 0.5 * (p.dataset_size * p.phi * p.c / p.f + p.t_fix));
}

TEST(BuildInstance, HoverPowerScalesAffinely) {
  DeviceProfile p;
  UavProfile u1, u2;
  u1.p_hover = 100;
  u2.p_hover = 300;
  P1Instance a = build_instance({p}, {500.0}, u1, ChannelParams{}, 0.5, 0.5);
  P1Instance b = build_instance({p}, {500.0}, u2, ChannelParams{}, 0.5, 0.5);
  // Each scales by (0.5*300 + 0.5) / (0.5*100 + 0.5).
  double k = 150.5 / 50.5;
  EXPECT_NEAR(b.devices[0].z / a.devices[0].z, k, 1e-12);
  EXPECT_NEAR(b.devices[0].u_d2u / a.devices[0].u_d2u, k, 1e-12);
  EXPECT_DOUBLE_EQ(b.devices[0].a_d2u, a.devices[0].a_d2u);
}

TEST(BuildInstance, EmptySelectionThrows) {
  EXPECT_THROW(build_instance({}, {}, UavProfile{}, ChannelParams{}, 0.5, 0.5),
               std::invalid_argument);
}

TEST(BuildInstance, RecordsLargestZ) {
  DeviceProfile fast, slow;
  slow.f = fast.f / 10;
  P1Instance inst = build_instance({fast, slow, fast}, {300, 300, 300}, UavProfile{},
                                   ChannelParams{}, 0.5, 0.5);
  EXPECT_EQ(inst.n_star, 1);
}

TEST(Objective, SingleDeviceMaxTermIsItsOwn) {
  P1Instance inst = random_instance(1, 1);
  const P1Device &d = inst.devices[0];
  double b1 = inst.b_d2u_total, b2 = inst.b_u2d_total;
  double rd = b1 * std::log2(1 + d.cal_a_d2u / b1), ru = b2 * std::log2(1 + d.cal_a_u2d / b2);
  double expect = d.a_d2u / rd + d.a_u2d / ru + 3 * d.c_coef + d.u_d2u / rd + d.u_u2d / ru +
                  3 * d.z;
  EXPECT_NEAR(objective(inst, 3, {b1}, {b2}), expect, 1e-12 * expect);
}

TEST(Objective, MatchesExtendedPrecision) {
  Rng r(3);
  for (int t = 0; t < 200; ++t) {
    P1Instance inst = random_instance(100 + t, 1 + t % 3);
    size_t n = inst.devices.size();
    std::vector<double> bd(n), bu(n);
    for (size_t i = 0; i < n; ++i) {
      bd[i] = r.uniform(0.05, 1.0) * inst.b_d2u_total / n;
      bu[i] = r.uniform(0.05, 1.0) * inst.b_u2d_total / n;
    }
    double h = r.uniform(1, 20);
    long double ref = objective_ld(inst, h, bd, bu);
    EXPECT_NEAR(objective(inst, h, bd, bu), (double)ref, 1e-10 * (double)ref);
  }
}

TEST(Objective, GrowsAsBandwidthShrinks) {
  P1Instance inst = random_instance(5, 2);
  double prev = 0.0;
  for (double frac : {0.5, 0.1, 1e-2, 1e-3, 1e-4}) {
    double v = objective(inst, 2, {frac * inst.b_d2u_total, 0.5 * inst.b_d2u_total},
                         {0.5 * inst.b_u2d_total, 0.5 * inst.b_u2d_total});
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Slack, AsStated) {
  EXPECT_DOUBLE_EQ(slack_closed_form(2, 4, -3), 2.5);
  EXPECT_DOUBLE_EQ(slack_closed_form(0, 1, 1), 0.0);
  EXPECT_DOUBLE_EQ(slack_closed_form(0, 1, -1), 1.0);
  EXPECT_THROW(slack_closed_form(0, 0, 1), std::invalid_argument);
}

TEST(Violation, Examples) {
  EXPECT_DOUBLE_EQ(violation_psi(0, 1, 0), 0.0);
  EXPECT_DOUBLE_EQ(violation_psi(1, 2, -5), 0.5);
  EXPECT_DOUBLE_EQ(violation_psi(0, 1, 3), 3.0);
  AlmState st;
  st.upsilon = {0, 0};
  st.sigma = 1;
  EXPECT_DOUBLE_EQ(violation_psi(st, {3, 4}), 5.0);
}

TEST(OuterUpdate, MultiplierStep) {
  AlmState st;
  st.upsilon = {1};
  st.sigma = 2;
  st.kappa = 0.5;
  st.epsilon = 0.25;
  AlmState s = outer_update(st, {0.5}, true);
  EXPECT_DOUBLE_EQ(s.upsilon[0], 2.0);
  EXPECT_DOUBLE_EQ(s.sigma, 2.0);
  EXPECT_DOUBLE_EQ(s.kappa, 0.25);
  EXPECT_DOUBLE_EQ(s.epsilon, 0.25 / std::pow(2.0, -st.zeta2));
  EXPECT_EQ(s.j, 1);
}

TEST(OuterUpdate, PenaltyGrowth) {
  AlmState st;
  st.upsilon = {1.5};
  st.sigma = 3;
  st.rho = 2;
  AlmState s = outer_update(st, {0.5}, false);
  EXPECT_DOUBLE_EQ(s.sigma, 6.0);
  EXPECT_DOUBLE_EQ(s.upsilon[0], 1.5);
  EXPECT_DOUBLE_EQ(s.kappa, 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(s.epsilon, 1.0 / std::pow(6.0, -st.zeta1));
}

TEST(OuterUpdate, MultiplierClampsAtZero) {
  AlmState st;
  st.upsilon = {1};
  st.sigma = 2;
  EXPECT_EQ(outer_update(st, {-3}, true).upsilon[0], 0.0);
}

TEST(OuterUpdate, SigmaNonDecreasing) {
  AlmState st = init_state(P1Config{}, 2);
  Rng r(9);
  for (int i = 0; i < 50; ++i) {
    AlmState s = outer_update(st, {r.uniform(-1, 1), r.uniform(-1, 1)}, r.bernoulli(0.5));
    EXPECT_GE(s.sigma, st.sigma);
    for (double u : s.upsilon) EXPECT_GE(u, 0.0);
    st = s;
  }
}

TEST(ProjectedGradient, QuadraticStub) {
  // f(x) = (x0 - 2)^2 + 3 (x1 + 1)^2 on the box x >= 0: minimiser (2, 0).
  InnerProblem prob;
  prob.eval = [](const std::vector<double> &x, std::vector<double> &g) {
    g = {2 * (x[0] - 2), 6 * (x[1] + 1)};
    return (x[0] - 2) * (x[0] - 2) + 3 * (x[1] + 1) * (x[1] + 1);
  };
  prob.project = [](std::vector<double> &x) {
    for (double &v : x) v = std::max(v, 0.0);
  };
  InnerResult res = projected_gradient(prob, {7.0, 5.0}, 0.002, 1e-9, 10000);
  EXPECT_NEAR(res.x[0], 2.0, 1e-6);
  EXPECT_NEAR(res.x[1], 0.0, 1e-6);
  EXPECT_LE(res.grad_norm, 1e-9);
  EXPECT_FALSE(res.hit_cap);
}

TEST(ProjectedGradient, LargeToleranceReturnsStart) {
  InnerProblem prob;
  prob.eval = [](const std::vector<double> &x, std::vector<double> &g) {
    g = {2 * x[0]};
    return x[0] * x[0];
  };
  prob.project = [](std::vector<double> &) {};
  InnerResult res = projected_gradient(prob, {3.0}, 0.002, 1e9, 10000);
  EXPECT_EQ(res.steps, 0);
  EXPECT_EQ(res.x[0], 3.0);
}

TEST(ProjectedGradient, CapRaisesWarning) {
  InnerProblem prob;
  prob.eval = [](const std::vector<double> &x, std::vector<double> &g) {
    g = {2 * x[0]};
    return x[0] * x[0];
  };
  prob.project = [](std::vector<double> &) {};
  InnerResult res = projected_gradient(prob, {3.0}, 1e-6, 1e-30, 1);
  EXPECT_TRUE(res.hit_cap);
  EXPECT_EQ(res.steps, 1);
}

TEST(InnerMinimize, GradientBelowTolerance) {
  P1Instance inst = random_instance(12, 2);
  P1Config cfg;
  AlmState st = init_state(cfg, inst.devices.size());
  InnerResult res = inner_minimize(inst, st, start_point(inst, cfg), cfg);
  EXPECT_FALSE(res.hit_cap);
  EXPECT_LE(res.grad_norm, std::min(st.kappa, cfg.kappa_floor));
}

TEST(Simplex, ProjectionProperties) {
  Rng r(2);
  for (int t = 0; t < 200; ++t) {
    size_t n = 1 + r.below(6);
    std::vector<double> s(n);
    for (double &v : s) v = r.uniform(-2, 2);
    double floor = 1e-3;
    project_simplex(s.data(), n, floor);
    EXPECT_NEAR(std::accumulate(s.begin(), s.end(), 0.0), 1.0, 1e-12);
    for (double v : s) EXPECT_GE(v, floor - 1e-15);
  }
}

TEST(Solve, FeasibleIntegerOutput) {
  for (int t = 0; t < 20; ++t) {
    P1Instance inst = random_instance(200 + t, 1 + t % 3);
    P1Solution s = solve(inst);
    EXPECT_GE(s.h_star, 1);
    double sd = std::accumulate(s.b_d2u.begin(), s.b_d2u.end(), 0.0);
    double su = std::accumulate(s.b_u2d.begin(), s.b_u2d.end(), 0.0);
    EXPECT_LE(sd, inst.b_d2u_total * (1 + 1e-12));
    EXPECT_LE(su, inst.b_u2d_total * (1 + 1e-12));
    EXPECT_NEAR(s.objective_value, objective(inst, s.h_star, s.b_d2u, s.b_u2d),
                1e-12 * s.objective_value);
  }
}

TEST(Solve, SingleDeviceMatchesGridSearch) {
  for (int t = 0; t < 10; ++t) {
    P1Instance inst = random_instance(300 + t, 1);
    P1Solution s = solve(inst);
    P1Solution o = brute_force_oracle(inst, 1, 20, 200);
    EXPECT_LE(s.objective_value, o.objective_value * 1.02);
  }
}

TEST(Solve, SymmetricInstanceSplitsEvenly) {
  DeviceProfile p;
  p.c = 60 * 6272;
  UavProfile u;
  P1Instance inst = build_instance({p, p}, {800.0, 800.0}, u, ChannelParams{}, 0.5, 0.5);
  P1Solution s = solve(inst);
  EXPECT_NEAR(s.b_d2u[0] / inst.b_d2u_total, 0.5, 1e-6);
  EXPECT_NEAR(s.b_u2d[0] / inst.b_u2d_total, 0.5, 1e-6);
}

TEST(Solve, NeverWorseThanStartBaseline) {
  for (int t = 0; t < 100; ++t) {
    P1Instance inst = random_instance(400 + t, 1 + t % 3);
    size_t n = inst.devices.size();
    std::vector<double> bd(n, inst.b_d2u_total / n), bu(n, inst.b_u2d_total / n);
    EXPECT_LE(solve(inst).objective_value, objective(inst, 5, bd, bu));
  }
}

TEST(Solve, Deterministic) {
  P1Instance inst = random_instance(77, 3);
  P1Solution a = solve(inst), b = solve(inst);
  EXPECT_EQ(a.h_star, b.h_star);
  EXPECT_EQ(a.b_d2u, b.b_d2u);
  EXPECT_EQ(a.b_u2d, b.b_u2d);
  EXPECT_EQ(a.objective_value, b.objective_value);
}

TEST(Solve, InfeasibleBudgetThrows) {
  P1Instance inst = random_instance(1, 1);
  inst.b_d2u_total = 0;
  EXPECT_THROW(solve(inst), std::invalid_argument);
}

TEST(Oracle, RefiningGridNeverWorse) {
  for (int t = 0; t < 5; ++t) {
    P1Instance inst = random_instance(500 + t, 2);
    double coarse = brute_force_oracle(inst, 1, 10, 20).objective_value;
    double fine = brute_force_oracle(inst, 1, 10, 40).objective_value;
    EXPECT_LE(fine, coarse);
  }
}

TEST(Oracle, NoRandomGridPointBeatsIt) {
  P1Instance inst = random_instance(600, 2);
  const int grid = 50;
  P1Solution o = brute_force_oracle(inst, 1, 10, grid);
  Rng r(6);
  for (int i = 0; i < 500; ++i) {
    int k1 = 1 + static_cast<int>(r.below(grid - 1));
    int k2 = 1 + static_cast<int>(r.below(grid - 1));
    double h = 1 + static_cast<double>(r.below(10));
    double v = objective(inst, h, {inst.b_d2u_total * k1 / grid, inst.b_d2u_total * (grid - k1) / grid},
                         {inst.b_u2d_total * k2 / grid, inst.b_u2d_total * (grid - k2) / grid});
    EXPECT_LE(o.objective_value, v * 1.001);
  }
}

}  // namespace
}  // namespace hflsim
