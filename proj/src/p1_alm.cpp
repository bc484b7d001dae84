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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hflsim {

namespace {

constexpr double kFractionFloor = 1e-9;
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;
constexpr double kMaxStep = 1e12;

// 1 / (B log2(1 + A/B)) and its derivative in B.
struct InvRate {
  double value;
  double slope;
};

InvRate inv_rate(double bw, double cal_a) {
  double x = cal_a / bw;
  double l = std::log1p(x) / std::numbers::ln2;
  double r = bw * l;
  double dr = l - x / ((1.0 + x) * std::numbers::ln2);
  return {1.0 / r, -dr / (r * r)};
}

double inv_rate_value(double bw, double cal_a) {
  return std::numbers::ln2 / (bw * std::log1p(cal_a / bw));
}

}  // namespace

void P1Instance::validate() const {
  if (devices.empty()) throw std::invalid_argument("P1 instance: empty selection");
  if (!(b_d2u_total > 0 && b_u2d_total > 0)) {
    throw std::invalid_argument("P1 instance: bandwidth budgets must be positive");
  }
  for (const auto &d : devices) {
    if (!(d.cal_a_d2u > 0 && d.cal_a_u2d > 0) || d.a_d2u < 0 || d.a_u2d < 0 || d.u_d2u < 0 ||
        d.u_u2d < 0 || d.z < 0 || d.c_coef < 0) {
      throw std::invalid_argument("P1 instance: constants out of range");
    }
  }
}

void P1Config::validate() const {
  if (!(sigma0 > 0) || upsilon0 < 0 || !(zeta1 > 0 && zeta1 <= zeta2 && zeta2 <= 1) ||
      !(rho >= 2 && rho <= 10) || !(eta_hat > 0) || !(h0 >= 1) || inner_cap < 0 ||
      outer_cap < 1) {
    throw std::invalid_argument("P1 config out of range");
  }
}

P1Instance build_instance(const std::vector<DeviceProfile> &profiles,
                          const std::vector<double> &distances, const UavProfile &uav,
                          const ChannelParams &channel, double lambda4, double lambda5) {
  if (profiles.empty()) throw std::invalid_argument("build_instance: empty selection");
  if (profiles.size() != distances.size()) {
    throw std::invalid_argument("build_instance: profile/distance count mismatch");
  }
  P1Instance inst;
  inst.b_d2u_total = uav.b_d2u_total;
  inst.b_u2d_total = uav.b_u2d_total;
  inst.lambda4 = lambda4;
  inst.lambda5 = lambda5;
  double hover_w = lambda4 * uav.p_hover + lambda5;
  for (size_t n = 0; n < profiles.size(); ++n) {
    const DeviceProfile &p = profiles[n];
    double d = distances[n];
    if (!(d > 0)) throw std::domain_error("build_instance: non-positive distance");
    P1Device dev;
    dev.a_d2u = lambda4 * p.i_d2u * p.p_d2u;
    dev.cal_a_d2u = p.p_d2u * std::pow(d, -channel.alpha_d2u) / channel.n0;
    dev.a_u2d = lambda4 * uav.i_u2d * uav.p_u2d;
    dev.cal_a_u2d = uav.p_u2d * std::pow(d, -channel.alpha_u2d) / channel.n0;
    dev.u_d2u = hover_w * p.i_d2u * p.p_d2u;
    dev.u_u2d = hover_w * uav.i_u2d * uav.p_u2d;
    dev.z = hover_w * (p.dataset_size * p.phi * p.c / p.f + p.t_fix);
    dev.c_coef = lambda4 * p.f * p.f * p.phi * p.c * p.dataset_size * p.theta / 2.0;
    inst.devices.push_back(dev);
  }
  for (size_t n = 1; n < inst.devices.size(); ++n) {
    if (inst.devices[n].z > inst.devices[inst.n_star].z) inst.n_star = static_cast<int>(n);
  }
  return inst;
}

double objective(const P1Instance &inst, double h, const std::vector<double> &b_d2u,
                 const std::vector<double> &b_u2d) {
  size_t n = inst.devices.size();
  if (b_d2u.size() != n || b_u2d.size() != n) {
    throw std::invalid_argument("objective: bandwidth vector length");
  }
  double sum = 0.0;
  double mx = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    const P1Device &d = inst.devices[i];
    if (!(b_d2u[i] > 0 && b_u2d[i] > 0)) return std::numeric_limits<double>::infinity();
    double id = inv_rate_value(b_d2u[i], d.cal_a_d2u);
    double iu = inv_rate_value(b_u2d[i], d.cal_a_u2d);
    sum += d.a_d2u * id + d.a_u2d * iu + h * d.c_coef;
    mx = std::max(mx, d.u_d2u * id + d.u_u2d * iu + h * d.z);
  }
  return sum + mx;
}

double slack_closed_form(double upsilon, double sigma, double g_val) {
  if (!(sigma > 0)) throw std::invalid_argument("slack_closed_form: sigma must be positive");
  return std::max(-upsilon / sigma - g_val, 0.0);
}

double violation_psi(double upsilon, double sigma, double g_val) {
  if (!(sigma > 0)) throw std::invalid_argument("violation_psi: sigma must be positive");
  double v = std::max(g_val, -upsilon / sigma);
  return std::sqrt(v * v);
}

double violation_psi(const AlmState &state, const std::vector<double> &g_vals) {
  double s = 0.0;
  for (size_t i = 0; i < g_vals.size(); ++i) {
    double v = violation_psi(state.upsilon[i], state.sigma, g_vals[i]);
    s += v * v;
  }
  return std::sqrt(s);
}

AlmState init_state(const P1Config &cfg, size_t n_constraints) {
  AlmState st;
  st.upsilon.assign(n_constraints, cfg.upsilon0);
  st.sigma = cfg.sigma0;
  st.kappa = 1.0 / cfg.sigma0;
  st.epsilon = 1.0 / std::pow(cfg.sigma0, -cfg.zeta1);
  st.zeta1 = cfg.zeta1;
  st.zeta2 = cfg.zeta2;
  st.rho = cfg.rho;
  return st;
}

AlmState outer_update(const AlmState &state, const std::vector<double> &g_vals,
                      bool violation_ok) {
  AlmState s = state;
  if (g_vals.size() != s.upsilon.size()) {
    throw std::invalid_argument("outer_update: constraint count mismatch");
  }
  if (violation_ok) {
    for (size_t i = 0; i < g_vals.size(); ++i) {
      s.upsilon[i] = std::max(s.upsilon[i] + s.sigma * g_vals[i], 0.0);
    }
    s.kappa = s.kappa / s.sigma;
    s.epsilon = s.epsilon / std::pow(s.sigma, -s.zeta2);
  } else {
    s.sigma = s.rho * s.sigma;
    s.kappa = 1.0 / s.sigma;
    s.epsilon = 1.0 / std::pow(s.sigma, -s.zeta1);
  }
  s.j += 1;
  return s;
}

void project_simplex(double *s, size_t n, double floor) {
  if (n == 0) return;
  double mass = 1.0 - floor * static_cast<double>(n);
  std::vector<double> u(n);
  for (size_t i = 0; i < n; ++i) u[i] = s[i] - floor;
  std::vector<double> v = u;
  std::sort(v.begin(), v.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (size_t k = 0; k < n; ++k) {
    cum += v[k];
    double t = (cum - mass) / static_cast<double>(k + 1);
    if (k + 1 == n || v[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  for (size_t i = 0; i < n; ++i) s[i] = floor + std::max(u[i] - theta, 0.0);
}

InnerResult projected_gradient(const InnerProblem &prob, const std::vector<double> &start,
                               double step, double tol, int max_steps) {
  InnerResult res;
  res.x = start;
  prob.project(res.x);
  std::vector<double> g(res.x.size());
  std::vector<double> trial(res.x.size());
  res.value = prob.eval(res.x, g);
  auto pg_norm = [&](const std::vector<double> &x, const std::vector<double> &grad) {
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] - grad[i];
    prob.project(y);
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
  };
  res.grad_norm = pg_norm(res.x, g);
  // Spectral (Barzilai-Borwein) trial steps with an Armijo test along the projection arc;
  // the first trial uses the configured step.
  double alpha = step;
  std::vector<double> g_trial(res.x.size());
  while (res.grad_norm > tol) {
    if (res.steps >= max_steps) {
      res.hit_cap = true;
      break;
    }
    bool accepted = false;
    double f_trial = 0.0;
    for (int backtrack = 0; backtrack < 80; ++backtrack) {
      for (size_t i = 0; i < trial.size(); ++i) trial[i] = res.x[i] - alpha * g[i];
      prob.project(trial);
      f_trial = prob.eval(trial, g_trial);
      double lin = 0.0;
      for (size_t i = 0; i < trial.size(); ++i) lin += g[i] * (trial[i] - res.x[i]);
      if (std::isfinite(f_trial) && f_trial <= res.value + kArmijo * lin) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++res.steps;
    if (!accepted) break;  // no representable decrease left
    double ss = 0.0;
    double sy = 0.0;
    for (size_t i = 0; i < trial.size(); ++i) {
      double sd = trial[i] - res.x[i];
      ss += sd * sd;
      sy += sd * (g_trial[i] - g[i]);
    }
    res.x.swap(trial);
    res.value = f_trial;
    g.swap(g_trial);
    res.grad_norm = pg_norm(res.x, g);
    alpha = sy > 0 ? std::clamp(ss / sy, kMinStep, kMaxStep) : std::min(alpha * 2.0, kMaxStep);
  }
  return res;
}

std::vector<double> start_point(const P1Instance &inst, const P1Config &cfg) {
  size_t n = inst.devices.size();
  std::vector<double> x(1 + 2 * n, 1.0 / static_cast<double>(n));
  x[0] = cfg.h0;
  return x;
}

namespace {

// Reduced augmented Lagrangian with the epigraph slack eliminated in closed form.
// For constraints g_n - Y <= 0 with multipliers u_n, the optimal slack solves
// sum_n max(0, u_n/sigma + g_n - Y) = 1/sigma.
struct Reduced {
  const P1Instance &inst;
  const AlmState &st;
  // Outputs of the last evaluation.
  std::vector<double> g;
  double y = 0.0;

  double slack(const std::vector<double> &gv) const {
    size_t n = gv.size();
    std::vector<double> q(n);
    for (size_t i = 0; i < n; ++i) q[i] = st.upsilon[i] / st.sigma + gv[i];
    std::sort(q.begin(), q.end(), std::greater<double>());
    double target = 1.0 / st.sigma;
    double cum = 0.0;
    for (size_t k = 0; k < n; ++k) {
      cum += q[k];
      double yk = (cum - target) / static_cast<double>(k + 1);
      if (k + 1 == n || q[k + 1] <= yk) return yk;
    }
    return q.back() - target;
  }

  double eval(const std::vector<double> &x, std::vector<double> &grad) {
    size_t n = inst.devices.size();
    double h = x[0];
    g.assign(n, 0.0);
    std::vector<InvRate> rd(n);
    std::vector<InvRate> ru(n);
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const P1Device &d = inst.devices[i];
      rd[i] = inv_rate(x[1 + i] * inst.b_d2u_total, d.cal_a_d2u);
      ru[i] = inv_rate(x[1 + n + i] * inst.b_u2d_total, d.cal_a_u2d);
      sum += d.a_d2u * rd[i].value + d.a_u2d * ru[i].value + h * d.c_coef;
      g[i] = d.u_d2u * rd[i].value + d.u_u2d * ru[i].value + h * d.z;
    }
    y = slack(g);
    double pen = 0.0;
    grad.assign(x.size(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      const P1Device &d = inst.devices[i];
      double ratio = st.upsilon[i] / st.sigma;
      double act = std::max(0.0, ratio + g[i] - y);
      pen += act * act - ratio * ratio;
      double lam = st.sigma * act;
      grad[0] += d.c_coef + lam * d.z;
      grad[1 + i] = (d.a_d2u + lam * d.u_d2u) * rd[i].slope * inst.b_d2u_total;
      grad[1 + n + i] = (d.a_u2d + lam * d.u_u2d) * ru[i].slope * inst.b_u2d_total;
    }
    return sum + y + 0.5 * st.sigma * pen;
  }
};

void project_point(std::vector<double> &x, size_t n) {
  x[0] = std::max(x[0], 1.0);
  project_simplex(x.data() + 1, n, kFractionFloor);
  project_simplex(x.data() + 1 + n, n, kFractionFloor);
}

// Divides every cost coefficient by `scale` so the solver works near unit magnitude.
P1Instance normalized(const P1Instance &inst, double scale) {
  P1Instance out = inst;
  for (auto &d : out.devices) {
    d.a_d2u /= scale;
    d.a_u2d /= scale;
    d.u_d2u /= scale;
    d.u_u2d /= scale;
    d.z /= scale;
    d.c_coef /= scale;
  }
  return out;
}

std::vector<double> constraint_values(const P1Instance &inst, const AlmState &st,
                                      const std::vector<double> &x) {
  Reduced red{inst, st, {}, 0.0};
  std::vector<double> grad;
  red.eval(x, grad);
  std::vector<double> c(red.g.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = red.g[i] - red.y;
  return c;
}

}  // namespace

InnerResult inner_minimize(const P1Instance &inst, const AlmState &state,
                           const std::vector<double> &start, const P1Config &cfg) {
  size_t n = inst.devices.size();
  Reduced red{inst, state, {}, 0.0};
  InnerProblem prob;
  prob.eval = [&red](const std::vector<double> &x, std::vector<double> &g) {
    return red.eval(x, g);
  };
  prob.project = [n](std::vector<double> &x) { project_point(x, n); };
  double tol = std::min(state.kappa, cfg.kappa_floor);
  return projected_gradient(prob, start, cfg.eta_hat, tol, cfg.inner_cap);
}

P1Solution solve(const P1Instance &inst, const P1Config &cfg) {
  inst.validate();
  cfg.validate();
  size_t n = inst.devices.size();
  std::vector<double> x = start_point(inst, cfg);
  auto to_bw = [&](const std::vector<double> &pt, std::vector<double> &bd,
                   std::vector<double> &bu) {
    bd.resize(n);
    bu.resize(n);
    for (size_t i = 0; i < n; ++i) {
      bd[i] = pt[1 + i] * inst.b_d2u_total;
      bu[i] = pt[1 + n + i] * inst.b_u2d_total;
    }
  };
  std::vector<double> bd;
  std::vector<double> bu;
  to_bw(x, bd, bu);
  double scale = objective(inst, x[0], bd, bu);
  if (!(scale > 0) || !std::isfinite(scale)) scale = 1.0;
  P1Instance work = normalized(inst, scale);

  P1Solution sol;
  AlmState st = init_state(cfg, n);
  double eps0 = std::min(st.epsilon, cfg.eps_final);
  double psi_prev = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cfg.outer_cap; ++j) {
    InnerResult r = inner_minimize(work, st, x, cfg);
    x = r.x;
    sol.inner_steps += r.steps;
    sol.warning = sol.warning || r.hit_cap;
    sol.outer_iterations = j + 1;
    std::vector<double> c = constraint_values(work, st, x);
    double psi = violation_psi(st, c);
    if (psi <= st.epsilon && psi <= eps0) break;
    // Stalled violation also counts as the penalty-growth branch.
    bool ok = psi <= st.epsilon && psi <= cfg.progress_ratio * psi_prev;
    st = outer_update(st, c, ok);
    psi_prev = psi;
  }

  sol.h_relaxed = x[0];
  to_bw(x, bd, bu);
  // Renormalise so rounding in the projection never overshoots a budget.
  double sd = 0.0;
  double su = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sd += bd[i];
    su += bu[i];
  }
  for (size_t i = 0; i < n; ++i) {
    bd[i] *= std::min(1.0, inst.b_d2u_total / sd);
    bu[i] *= std::min(1.0, inst.b_u2d_total / su);
  }
  int lo = std::max(1, static_cast<int>(std::floor(x[0])));
  int hi = std::max(1, static_cast<int>(std::ceil(x[0])));
  double f_lo = objective(inst, lo, bd, bu);
  double f_hi = objective(inst, hi, bd, bu);
  sol.h_star = f_hi < f_lo ? hi : lo;
  sol.objective_value = std::min(f_lo, f_hi);
  sol.b_d2u = bd;
  sol.b_u2d = bu;
  return sol;
}

P1Solution brute_force_oracle(const P1Instance &inst, int h_lo, int h_hi, int grid_points) {
  inst.validate();
  size_t n = inst.devices.size();
  if (h_lo < 1 || h_hi < h_lo || grid_points < static_cast<int>(n)) {
    throw std::invalid_argument("brute_force_oracle: bad ranges");
  }
  int G = grid_points;
  // Tables per device and lattice index k (bandwidth share k/G).
  std::vector<std::vector<double>> sum_d(n, std::vector<double>(G + 1));
  std::vector<std::vector<double>> max_d(n, std::vector<double>(G + 1));
  std::vector<std::vector<double>> sum_u(n, std::vector<double>(G + 1));
  std::vector<std::vector<double>> max_u(n, std::vector<double>(G + 1));
  for (size_t i = 0; i < n; ++i) {
    const P1Device &d = inst.devices[i];
    for (int k = 1; k <= G; ++k) {
      double id = inv_rate_value(inst.b_d2u_total * k / G, d.cal_a_d2u);
      double iu = inv_rate_value(inst.b_u2d_total * k / G, d.cal_a_u2d);
      sum_d[i][k] = d.a_d2u * id;
      max_d[i][k] = d.u_d2u * id;
      sum_u[i][k] = d.a_u2d * iu;
      max_u[i][k] = d.u_u2d * iu;
    }
  }
  // The objective strictly decreases in every bandwidth, so any lattice point with
  // leftover budget is dominated by one that hands the leftover to some device.
  // Enumerating compositions of G is therefore exhaustive over the lattice.
  std::vector<std::vector<int>> comps;
  std::vector<int> cur(n, 1);
  std::function<void(size_t, int)> rec = [&](size_t i, int left) {
    if (i + 1 == n) {
      cur[i] = left;
      comps.push_back(cur);
      return;
    }
    for (int k = 1; k <= left - static_cast<int>(n - i - 1); ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, G);
  double csum = 0.0;
  for (const auto &d : inst.devices) csum += d.c_coef;

  double best = std::numeric_limits<double>::infinity();
  const std::vector<int> *best_d = nullptr;
  const std::vector<int> *best_u = nullptr;
  int best_h = h_lo;
  std::vector<double> gmax(n);
  for (const auto &cd : comps) {
    for (const auto &cu : comps) {
      double base = 0.0;
      for (size_t i = 0; i < n; ++i) {
        base += sum_d[i][cd[i]] + sum_u[i][cu[i]];
        gmax[i] = max_d[i][cd[i]] + max_u[i][cu[i]];
      }
      for (int h = h_lo; h <= h_hi; ++h) {
        double mx = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < n; ++i) mx = std::max(mx, gmax[i] + h * inst.devices[i].z);
        double f = base + h * csum + mx;
        if (f < best) {
          best = f;
          best_d = &cd;
          best_u = &cu;
          best_h = h;
        }
      }
    }
  }
  P1Solution sol;
  sol.h_star = best_h;
  sol.h_relaxed = best_h;
  sol.b_d2u.resize(n);
  sol.b_u2d.resize(n);
  for (size_t i = 0; i < n; ++i) {
    sol.b_d2u[i] = inst.b_d2u_total * (*best_d)[i] / G;
    sol.b_u2d[i] = inst.b_u2d_total * (*best_u)[i] / G;
  }
  sol.objective_value = objective(inst, best_h, sol.b_d2u, sol.b_u2d);
  return sol;
}

}  // namespace hflsim
