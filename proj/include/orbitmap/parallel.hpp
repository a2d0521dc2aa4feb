// Copyright 2026 The orbitmap Authors.
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

#ifndef ORBITMAP_PARALLEL_HPP_
#define ORBITMAP_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace orbitmap {

/// Number of worker threads used by data-parallel loops.
inline std::size_t worker_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Calls fn(i) for i in [begin, end), split into contiguous chunks across
/// worker threads. fn must only write to state owned by index i.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn) {
  const std::size_t n = end > begin ? end - begin : 0;
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        const std::size_t lo = begin + w * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace orbitmap

#endif  // ORBITMAP_PARALLEL_HPP_
