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

#ifndef BANNERFORGE_PROMPT_BUILDER_H_
#define BANNERFORGE_PROMPT_BUILDER_H_

#include <array>
#include <string>
#include <string_view>

#include "bannerforge/attribute_extraction.h"
#include "bannerforge/catalog.h"

namespace bannerforge {

// LLM: extracted sentence; PNAME: raw product name; PTYPE: product type label.
enum class Strategy { kLlm, kPname, kPtype };

inline constexpr std::array<Strategy, 3> kAllStrategies = {
    Strategy::kLlm, Strategy::kPname, Strategy::kPtype};

std::string_view StrategyName(Strategy s);  // "LLM", "PNAME", "PTYPE"
Strategy ParseStrategy(std::string_view text);  // case-insensitive

enum class PromptSource { kExtraction, kProductName, kProductType };
std::string_view PromptSourceName(PromptSource s);
PromptSource SourceFor(Strategy s);

struct ImagePrompt {
  std::string product_id;
  Strategy strategy = Strategy::kPname;
  std::string text;
  PromptSource source = PromptSource::kProductName;
};

// Pure. `suffix`, when non-empty, is appended verbatim. Throws
// Error(kMissingExtraction) for kLlm without a usable extraction.
ImagePrompt BuildPrompt(const Product& product, Strategy strategy,
                        const ExtractionResult* extraction,
                        std::string_view suffix = {});

}  // namespace bannerforge

#endif  // BANNERFORGE_PROMPT_BUILDER_H_
