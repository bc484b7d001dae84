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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

namespace hflsim {
namespace {

TEST(Rng, SameKeySameSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, NamedStreamsAreDistinct) {
  Rng a = Rng::stream(7, "mobility", 1, 2);
  Rng b = Rng::stream(7, "placement", 1, 2);
  Rng c = Rng::stream(7, "mobility", 2, 1);
  EXPECT_NE(a.key(), b.key());
  EXPECT_NE(a.key(), c.key());
  EXPECT_EQ(a.key(), Rng::stream(7, "mobility", 1, 2).key());
}

TEST(Rng, DrawIsFunctionOfKeyAndCounter) {
  Rng a(9);
  for (int i = 0; i < 10; ++i) a.next_u64();
  uint64_t eleventh = a.next_u64();
  Rng b(9);
  for (int i = 0; i < 10; ++i) b.uniform();
  EXPECT_EQ(b.next_u64(), eleventh);
  EXPECT_EQ(b.counter(), 11u);
}

TEST(Rng, UniformRangeAndMean) {
  Rng r(3);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Standard error of the mean is 1/sqrt(12 n) ~ 6.5e-4.
  EXPECT_NEAR(sum / n, 0.5, 5e-3);
}

TEST(Rng, BelowIsUnbiasedAndInRange) {
  Rng r(5);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    uint64_t v = r.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, n / 7, 500);
}

TEST(Rng, NormalMoments) {
  Rng r(11);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    ASSERT_TRUE(std::isfinite(z));
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, BernoulliEdges) {
  Rng r(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(r.bernoulli(0.0));
    EXPECT_TRUE(r.bernoulli(1.0));
  }
}

TEST(Rng, NameHashIsFnv1a) {
  // Published FNV-1a 64 test vectors.
  EXPECT_EQ(name_hash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(name_hash("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(name_hash("foobar"), 0x85944171f73967e8ULL);
}

TEST(Rng, Splitmix64ReferenceValue) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

}  // namespace
}  // namespace hflsim
