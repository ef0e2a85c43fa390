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

#ifndef BANNERFORGE_PNG_CODEC_H_
#define BANNERFORGE_PNG_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "bannerforge/digest.h"

namespace bannerforge {

// 8-bit interleaved RGB, row-major.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3

  std::uint8_t* at(int x, int y) {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
};

bool HasPngSignature(std::span<const std::uint8_t> bytes);

// Any PNG color type/bit depth is converted to 8-bit RGB; alpha is composited
// onto black. Throws Error(kDecodeFailure).
RgbImage DecodePng(std::span<const std::uint8_t> bytes);

// Deterministic for identical input: fixed compression settings, no
// timestamps or text chunks.
Bytes EncodePng(const RgbImage& image);

}  // namespace bannerforge

#endif  // BANNERFORGE_PNG_CODEC_H_
