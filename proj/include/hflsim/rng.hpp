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
#ifndef HFLSIM_RNG_HPP_
#define HFLSIM_RNG_HPP_

#include <cstdint>
#include <string_view>

namespace hflsim {

uint64_t splitmix64(uint64_t x);

// FNV-1a over the bytes of a stream name.
uint64_t name_hash(std::string_view name);

// Counter-based generator: the i-th draw is a pure function of (key, i), so a
// stream can be rebuilt anywhere from its key alone. Distributions are written
// out by hand because the std:: ones are implementation defined.
class Rng {
 public:
  explicit Rng(uint64_t key) : key_(key) {}

  // Named sub-stream of a global seed, optionally indexed (device id, round,
  // ...). Different names never share draws.
  static Rng stream(uint64_t seed, std::string_view name, uint64_t a = 0, uint64_t b = 0,
                    uint64_t c = 0);

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

  uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n);
  bool bernoulli(double p);
  // Standard normal via Box-Muller (one draw per call, no caching).
  double normal();

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace hflsim

#endif  // HFLSIM_RNG_HPP_
