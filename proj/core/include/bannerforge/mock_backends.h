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

#ifndef BANNERFORGE_MOCK_BACKENDS_H_
#define BANNERFORGE_MOCK_BACKENDS_H_

#include <atomic>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "bannerforge/adherence.h"
#include "bannerforge/attribute_extraction.h"
#include "bannerforge/image_gen.h"
#include "bannerforge/png_codec.h"

namespace bannerforge {

// Offline text generation. Replies "<subject> with <keywords> in <setting>"
// built from the quoted product name in the prompt (or the whole prompt),
// chosen deterministically from the prompt text.
class MockTextGenClient : public TextGenClient {
 public:
  enum class FailureMode { kEmptyReply, kTransport };

  // Prompts containing any of these product names fail.
  void FailOn(std::string product_name, FailureMode mode = FailureMode::kEmptyReply);

  std::string Generate(const TextGenRequest& request) override;
  std::size_t calls() const { return calls_.load(); }

 private:
  mutable std::mutex mu_;
  std::vector<std::pair<std::string, FailureMode>> failures_;
  std::atomic<std::size_t> calls_{0};
};

// Offline text-to-image backend: seeded value noise blended with a
// prompt-derived palette and gradient, encoded as PNG. Renders at
// width/scale_divisor x height/scale_divisor to keep offline runs small.
class MockImageGenClient : public ImageGenClient {
 public:
  enum class Mode { kNormal, kUnreachable, kReject, kNonImage };

  explicit MockImageGenClient(int scale_divisor = 8, Mode mode = Mode::kNormal)
      : scale_divisor_(scale_divisor), mode_(mode) {}

  Bytes Generate(std::string_view prompt, const GenParams& params) override;
  std::size_t calls() const { return calls_.load(); }

 private:
  int scale_divisor_;
  Mode mode_;
  std::atomic<std::size_t> calls_{0};
};

// Offline detector: a deterministic handful of common-object labels per image.
class MockDetectorClient : public DetectorClient {
 public:
  std::vector<Detection> Detect(std::span<const std::uint8_t> png_bytes) override;
};

RgbImage RenderProceduralImage(std::string_view prompt, std::int64_t seed, int width,
                               int height);

}  // namespace bannerforge

#endif  // BANNERFORGE_MOCK_BACKENDS_H_
