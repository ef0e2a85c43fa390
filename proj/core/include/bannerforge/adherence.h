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

#ifndef BANNERFORGE_ADHERENCE_H_
#define BANNERFORGE_ADHERENCE_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bannerforge/attribute_extraction.h"
#include "bannerforge/digest.h"
#include "bannerforge/prompt_builder.h"

namespace bannerforge {

struct PromptObjects {
  std::string prompt_id;
  std::vector<std::string> labels;  // lowercase, deduplicated, non-empty
};

struct Detection {
  std::string label;
  double confidence = 0.0;  // [0, 1]
};

class DetectorClient {
 public:
  virtual ~DetectorClient() = default;
  virtual std::vector<Detection> Detect(std::span<const std::uint8_t> png_bytes) = 0;
};

inline constexpr double kDefaultPresenceThreshold = 0.25;

// Head-noun heuristic: the last token of the parsed subject when the
// extraction has a tuple, else the last token of the prompt text, stripped of
// non-alphanumerics and lowercased. Throws Error(kEmptyLabel).
PromptObjects ExtractObjects(const ImagePrompt& prompt,
                             const ExtractionResult* extraction,
                             std::string_view prompt_id = {});

// Label -> 0/1. A label is present iff a detection with the same label
// (case-insensitive) has confidence >= threshold.
std::map<std::string, int> Presence(const PromptObjects& objects,
                                    std::span<const Detection> detections,
                                    double threshold);

struct ParItem {
  PromptObjects objects;
  std::vector<Detection> detections;
};

// Flat mean of presence over every (prompt, label) pair. Throws
// Error(kEmptyInput) for an empty batch or a prompt without labels.
double ParScore(std::span<const ParItem> batch,
                double threshold = kDefaultPresenceThreshold);

// Mean over prompts of the per-prompt presence mean. Reported next to the
// flat mean for transparency.
double PerPromptMeanPar(std::span<const ParItem> batch,
                        double threshold = kDefaultPresenceThreshold);

}  // namespace bannerforge

#endif  // BANNERFORGE_ADHERENCE_H_
