// Copyright 2026 The BannerForge Authors.
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

#ifndef BANNERFORGE_BOUNDED_POOL_H_
#define BANNERFORGE_BOUNDED_POOL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bannerforge {

// Runs job(0) .. job(count - 1) on at most `max_inflight` threads. Jobs must
// not throw; callers capture failures into per-index slots.
inline void RunBounded(std::size_t count, std::size_t max_inflight,
                       const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::clamp<std::size_t>(max_inflight, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
}

}  // namespace bannerforge

#endif  // BANNERFORGE_BOUNDED_POOL_H_
