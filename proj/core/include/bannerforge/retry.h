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

#ifndef BANNERFORGE_RETRY_H_
#define BANNERFORGE_RETRY_H_

#include <chrono>
#include <functional>
#include <thread>
#include <utility>

#include "bannerforge/error.h"

namespace bannerforge {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline Sleeper ThreadSleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

// Runs `fn`, retrying only on retryable Errors. Backoff doubles after every
// failed attempt. The last error is rethrown once attempts run out.
template <typename Fn>
auto CallWithRetry(const RetryPolicy& policy, const Sleeper& sleep, Fn&& fn,
                   int* attempts_used = nullptr) -> decltype(fn()) {
  auto backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    if (attempts_used) *attempts_used = attempt;
    try {
      return fn();
    } catch (const Error& e) {
      if (!e.retryable() || attempt >= policy.max_attempts) throw;
    }
    if (sleep) sleep(backoff);
    backoff = std::chrono::milliseconds(static_cast<long long>(
        static_cast<double>(backoff.count()) * policy.multiplier));
  }
}

}  // namespace bannerforge

#endif  // BANNERFORGE_RETRY_H_
