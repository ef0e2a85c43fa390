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

#include "bannerforge/mock_backends.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "bannerforge/error.h"
#include "bannerforge/png_codec.h"
#include "bannerforge/util.h"

namespace bannerforge {
namespace {

constexpr std::array<std::string_view, 6> kSettings = {
    "a cozy living room", "a bright kitchen",  "a sunny backyard",
    "a modern bedroom",   "a family playroom", "a tidy home office"};

constexpr std::array<std::string_view, 12> kDetectorVocabulary = {
    "dog",   "cat",  "couch", "bed",  "chair",   "person",
    "teddy bear", "potted plant", "tv", "book", "vase", "handbag"};

std::string QuotedName(std::string_view prompt) {
  const auto first = prompt.find('\'');
  const auto last = prompt.rfind('\'');
  if (first == std::string_view::npos || last <= first + 1) return std::string(prompt);
  return std::string(prompt.substr(first + 1, last - first - 1));
}

double LatticeValue(std::uint64_t seed, int octave, int gx, int gy) {
  std::uint64_t h = seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(octave + 1));
  h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(gx)) * 0xBF58476D1CE4E5B9ULL;
  h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(gy)) * 0x94D049BB133111EBULL;
  h ^= h >> 31;
  h *= 0xD6E8FEB86659FD93ULL;
  h ^= h >> 32;
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double Smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double ValueNoise(std::uint64_t seed, double x, double y) {
  double total = 0.0;
  double amplitude = 1.0;
  double norm = 0.0;
  double cell = 32.0;
  for (int octave = 0; octave < 5; ++octave) {
    const double fx = x / cell;
    const double fy = y / cell;
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const double tx = Smooth(fx - x0);
    const double ty = Smooth(fy - y0);
    const double v00 = LatticeValue(seed, octave, x0, y0);
    const double v10 = LatticeValue(seed, octave, x0 + 1, y0);
    const double v01 = LatticeValue(seed, octave, x0, y0 + 1);
    const double v11 = LatticeValue(seed, octave, x0 + 1, y0 + 1);
    const double top = v00 + (v10 - v00) * tx;
    const double bottom = v01 + (v11 - v01) * tx;
    total += amplitude * (top + (bottom - top) * ty);
    norm += amplitude;
    amplitude *= 0.5;
    cell /= 2.0;
  }
  return total / norm;
}

}  // namespace

void MockTextGenClient::FailOn(std::string product_name, FailureMode mode) {
  std::lock_guard lock(mu_);
  failures_.emplace_back(std::move(product_name), mode);
}

std::string MockTextGenClient::Generate(const TextGenRequest& request) {
  ++calls_;
  {
    std::lock_guard lock(mu_);
    for (const auto& [name, mode] : failures_) {
      if (request.prompt.find(name) == std::string::npos) continue;
      if (mode == FailureMode::kTransport) {
        throw Error(ErrorKind::kTransport, "mock text generation unavailable");
      }
      return "";
    }
  }
  const std::string name = QuotedName(request.prompt);
  std::vector<std::string> words;
  for (auto token : SplitWhitespace(name)) {
    std::string word;
    for (char c : token) {
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) word.push_back(c);
    }
    if (word.size() > 1) words.push_back(ToLowerAscii(word));
  }
  if (words.empty()) words.push_back("product");
  const std::string subject = words.back();
  std::string keywords;
  for (std::size_t i = 0; i + 1 < words.size() && i < 3; ++i) {
    if (!keywords.empty()) keywords += " and ";
    keywords += words[i];
  }
  if (keywords.empty()) keywords = "simple styling";
  const auto setting = kSettings[Fnv1a64(request.prompt) % kSettings.size()];
  return subject + " with " + keywords + " in " + std::string(setting);
}

RgbImage RenderProceduralImage(std::string_view prompt, std::int64_t seed, int width,
                               int height) {
  const std::uint64_t prompt_hash = Fnv1a64(prompt);
  const std::uint64_t noise_seed = prompt_hash ^ static_cast<std::uint64_t>(seed);
  std::array<std::array<double, 3>, 3> palette{};
  for (int c = 0; c < 3; ++c) {
    for (int ch = 0; ch < 3; ++ch) {
      palette[c][ch] = 40.0 + static_cast<double>((prompt_hash >> (8 * (3 * c + ch) % 56)) & 0xFF) * 0.7;
    }
  }
  SeededRng grain(noise_seed + 1);
  RgbImage image;
  image.width = width;
  image.height = height;
  image.pixels.resize(static_cast<std::size_t>(width) * height * 3);
  for (int y = 0; y < height; ++y) {
    const double gy = static_cast<double>(y) / std::max(height - 1, 1);
    for (int x = 0; x < width; ++x) {
      const double n = ValueNoise(noise_seed, x, y);
      auto* px = image.at(x, y);
      for (int ch = 0; ch < 3; ++ch) {
        double v = palette[0][ch] * (1.0 - n) + palette[1][ch] * n;
        v = 0.75 * v + 0.25 * (palette[2][ch] * gy + palette[0][ch] * (1.0 - gy));
        v += (grain.Unit() - 0.5) * 8.0;
        px[ch] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return image;
}

Bytes MockImageGenClient::Generate(std::string_view prompt, const GenParams& params) {
  ++calls_;
  switch (mode_) {
    case Mode::kUnreachable:
      throw Error(ErrorKind::kTransport, "mock image backend unreachable");
    case Mode::kReject:
      throw Error(ErrorKind::kBackendRejected, "mock image backend rejected the prompt");
    case Mode::kNonImage: {
      const std::string junk = "not an image: " + std::string(prompt);
      return Bytes(junk.begin(), junk.end());
    }
    case Mode::kNormal:
      break;
  }
  const int w = std::max(16, params.width / std::max(scale_divisor_, 1));
  const int h = std::max(16, params.height / std::max(scale_divisor_, 1));
  return EncodePng(RenderProceduralImage(prompt, params.seed, w, h));
}

std::vector<Detection> MockDetectorClient::Detect(std::span<const std::uint8_t> png_bytes) {
  DecodePng(png_bytes);
  SeededRng rng(Fnv1a64(std::string_view(reinterpret_cast<const char*>(png_bytes.data()),
                                         png_bytes.size())));
  std::vector<Detection> detections;
  const auto count = rng.Below(3);
  for (std::uint64_t i = 0; i < count; ++i) {
    detections.push_back({std::string(kDetectorVocabulary[rng.Below(kDetectorVocabulary.size())]),
                          0.1 + 0.9 * rng.Unit()});
  }
  return detections;
}

}  // namespace bannerforge
