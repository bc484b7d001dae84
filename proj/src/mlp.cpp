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
#include "hflsim/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "hflsim/rng.hpp"

namespace hflsim {

Mlp::Mlp(std::vector<int> sizes, Activation hidden, Activation output, uint64_t seed)
    : sizes_(std::move(sizes)), hidden_(hidden), output_(output) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least two layer sizes");
  size_t total = 0;
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<size_t>(sizes_[l + 1]) * (sizes_[l] + 1);
  }
  params_.assign(total, 0.0);
  Rng rng = Rng::stream(seed, "mlp-init");
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    int in = sizes_[l];
    int out = sizes_[l + 1];
    double a = std::sqrt(6.0 / (in + out));
    double *w = params_.data() + offsets_[l];
    for (int i = 0; i < in * out; ++i) w[i] = rng.uniform(-a, a);
  }
}

Activation Mlp::act_for(size_t layer) const {
  return layer + 2 == sizes_.size() ? output_ : hidden_;
}

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::kTanh:
      return std::tanh(z);
    case Activation::kSigmoid:
      return 1.0 / (1.0 + std::exp(-z));
    default:
      return z;
  }
}

// Derivative expressed through the activation output y.
double activate_grad(Activation a, double y) {
  switch (a) {
    case Activation::kTanh:
      return 1.0 - y * y;
    case Activation::kSigmoid:
      return y * (1.0 - y);
    default:
      return 1.0;
  }
}

}  // namespace

std::vector<double> Mlp::forward(const double *x, Tape *tape) const {
  std::vector<double> cur(x, x + sizes_[0]);
  if (tape) {
    tape->out.clear();
    tape->out.push_back(cur);
  }
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    int in = sizes_[l];
    int out = sizes_[l + 1];
    const double *w = params_.data() + offsets_[l];
    const double *b = w + static_cast<size_t>(in) * out;
    std::vector<double> next(out);
    Activation a = act_for(l);
    for (int o = 0; o < out; ++o) {
      double z = b[o];
      const double *row = w + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) z += row[i] * cur[i];
      next[o] = activate(a, z);
    }
    cur.swap(next);
    if (tape) tape->out.push_back(cur);
  }
  return cur;
}

void Mlp::backward(const Tape &tape, const double *dout, std::vector<double> *grad_params,
                   std::vector<double> *grad_input) const {
  size_t layers = sizes_.size() - 1;
  std::vector<double> delta(dout, dout + sizes_.back());
  for (size_t li = layers; li-- > 0;) {
    int in = sizes_[li];
    int out = sizes_[li + 1];
    const std::vector<double> &y = tape.out[li + 1];
    const std::vector<double> &x = tape.out[li];
    Activation a = act_for(li);
    for (int o = 0; o < out; ++o) delta[o] *= activate_grad(a, y[o]);
    const double *w = params_.data() + offsets_[li];
    if (grad_params) {
      double *gw = grad_params->data() + offsets_[li];
      double *gb = gw + static_cast<size_t>(in) * out;
      for (int o = 0; o < out; ++o) {
        double *grow = gw + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) grow[i] += delta[o] * x[i];
        gb[o] += delta[o];
      }
    }
    if (li == 0 && !grad_input) break;
    std::vector<double> prev(in, 0.0);
    for (int o = 0; o < out; ++o) {
      const double *row = w + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) prev[i] += row[i] * delta[o];
    }
    delta.swap(prev);
  }
  if (grad_input) *grad_input = delta;
}

void Adam::step(std::vector<double> &params, const std::vector<double> &grad, bool ascend) {
  if (m.size() != params.size()) {
    m.assign(params.size(), 0.0);
    v.assign(params.size(), 0.0);
    t = 0;
  }
  ++t;
  double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  double sign = ascend ? 1.0 : -1.0;
  for (size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    params[i] += sign * lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
  }
}

}  // namespace hflsim
