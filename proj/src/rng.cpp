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
#include "hflsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace hflsim {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t name_hash(std::string_view name) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Rng Rng::stream(uint64_t seed, std::string_view name, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t k = splitmix64(seed ^ splitmix64(name_hash(name)));
  k = splitmix64(k ^ (a * 0xD1342543DE82EF95ULL));
  k = splitmix64(k ^ (b * 0xAF251AF3B0F025B5ULL));
  k = splitmix64(k ^ (c * 0x9FB21C651E98DF25ULL));
  return Rng(k);
}

uint64_t Rng::next_u64() {
  // Two rounds of mixing decorrelate adjacent counters of nearby keys.
  uint64_t x = key_ + 0x9E3779B97F4A7C15ULL * (++counter_);
  return splitmix64(splitmix64(x) ^ key_);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

uint64_t Rng::below(uint64_t n) {
  // Lemire-style rejection keeps the draw unbiased.
  uint64_t threshold = (0 - n) % n;
  for (;;) {
    uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace hflsim
