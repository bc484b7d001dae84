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
#ifndef HFLSIM_PARALLEL_HPP_
#define HFLSIM_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace hflsim {

// Worker count: HFLSIM_THREADS when set to a positive integer, else the hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n). Each index is handled exactly once; callers write results into
// per-index slots so merges stay in index order. Exceptions are rethrown (lowest index first).
void parallel_for(size_t n, const std::function<void(size_t)> &fn);

}  // namespace hflsim

#endif  // HFLSIM_PARALLEL_HPP_
