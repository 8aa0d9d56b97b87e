// Copyright 2026 The quenchsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace quench {

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each worker pops
/// indices from a shared atomic counter, so bodies must write only to
/// per-index storage; callers do any reduction afterwards in a fixed order.
/// The first exception thrown by any body is rethrown on the calling thread.
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& body) {
  if (n <= 0) return;
  if (threads < 1) threads = 1;
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw > 0 && threads > static_cast<int>(hw)) threads = hw;
  if (threads > n) threads = n;
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&]() {
      while (!failed.load(std::memory_order_relaxed)) {
        const int i = next.fetch_add(1);
        if (i >= n) break;
        try {
          body(i);
        } catch (...) {
          bool expected = false;
          if (failed.compare_exchange_strong(expected, true)) {
            error = std::current_exception();
          }
          break;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

/// Sums values[first..last) pairwise; deterministic for a fixed ordering no
/// matter how many threads produced the inputs.
template <typename T>
T pairwise_sum(const std::vector<T>& values, std::size_t first,
               std::size_t last) {
  const std::size_t count = last - first;
  if (count == 1) return values[first];
  if (count == 2) return values[first] + values[first + 1];
  const std::size_t mid = first + count / 2;
  return pairwise_sum(values, first, mid) + pairwise_sum(values, mid, last);
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(values, 0, values.size());
}

}  // namespace quench
