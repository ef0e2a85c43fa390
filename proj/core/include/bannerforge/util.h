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

#ifndef BANNERFORGE_UTIL_H_
#define BANNERFORGE_UTIL_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace bannerforge {

std::string_view TrimWhitespace(std::string_view text);

// Maximal runs of non-whitespace bytes (ASCII whitespace only).
std::vector<std::string_view> SplitWhitespace(std::string_view text);
std::size_t CountWords(std::string_view text);

std::string ToLowerAscii(std::string_view text);

// Decodes one UTF-8 code point starting at `pos`, advancing it. Returns
// nullopt on a malformed sequence and advances past the offending byte.
std::optional<char32_t> DecodeUtf8(std::string_view text, std::size_t& pos);
std::size_t CountCodePoints(std::string_view text);

// RFC 3339 UTC timestamp with second resolution, e.g. 2026-01-02T03:04:05Z.
std::string FormatUtc(std::chrono::system_clock::time_point tp);

using Clock = std::function<std::chrono::system_clock::time_point()>;
Clock SystemClock();

// mt19937_64 with a portable unbiased bounded draw. std::uniform_int_distribution
// is implementation-defined, which would break seed reproducibility across
// standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);

  // Uniform real in [0, 1) with 53 random bits.
  double Unit();

  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a; stable across platforms, used for seed derivation only.
std::uint64_t Fnv1a64(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace bannerforge

#endif  // BANNERFORGE_UTIL_H_
