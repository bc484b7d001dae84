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
#ifndef HFLSIM_MLP_HPP_
#define HFLSIM_MLP_HPP_

#include <cstdint>
#include <vector>

namespace hflsim {

enum class Activation { kIdentity, kTanh, kSigmoid };

// Fully connected network with all parameters in one flat vector
// (per layer: weights out x in row-major, then biases).
class Mlp {
 public:
  struct Tape {
    std::vector<std::vector<double>> out;  // post-activation output of each layer, [0] = input
  };

  Mlp() = default;
  Mlp(std::vector<int> sizes, Activation hidden, Activation output, uint64_t seed);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  const std::vector<int> &sizes() const { return sizes_; }

  std::vector<double> &params() { return params_; }
  const std::vector<double> &params() const { return params_; }

  std::vector<double> forward(const double *x, Tape *tape = nullptr) const;
  double forward_scalar(const std::vector<double> &x) const { return forward(x.data())[0]; }

  // Back-propagates dL/d(output). Parameter gradients are added into grad_params
  // (must be sized to params()); dL/d(input) is written when grad_input is non-null.
  void backward(const Tape &tape, const double *dout, std::vector<double> *grad_params,
                std::vector<double> *grad_input) const;

 private:
  Activation act_for(size_t layer) const;

  std::vector<int> sizes_;
  Activation hidden_ = Activation::kTanh;
  Activation output_ = Activation::kIdentity;
  std::vector<double> params_;
  std::vector<size_t> offsets_;
};

// Adam on a flat parameter vector. `ascend` flips the step direction.
struct Adam {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;

  void step(std::vector<double> &params, const std::vector<double> &grad, bool ascend = false);
};

}  // namespace hflsim

#endif  // HFLSIM_MLP_HPP_
