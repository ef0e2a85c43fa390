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

#include "bannerforge/prompt_builder.h"

#include "bannerforge/error.h"
#include "bannerforge/util.h"

namespace bannerforge {

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kLlm: return "LLM";
    case Strategy::kPname: return "PNAME";
    case Strategy::kPtype: return "PTYPE";
  }
  return "UNKNOWN";
}

Strategy ParseStrategy(std::string_view text) {
  const auto lower = ToLowerAscii(TrimWhitespace(text));
  if (lower == "llm") return Strategy::kLlm;
  if (lower == "pname") return Strategy::kPname;
  if (lower == "ptype") return Strategy::kPtype;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown strategy '" + std::string(text) + "' (LLM|PNAME|PTYPE)");
}

std::string_view PromptSourceName(PromptSource s) {
  switch (s) {
    case PromptSource::kExtraction: return "extraction";
    case PromptSource::kProductName: return "product_name";
    case PromptSource::kProductType: return "product_type";
  }
  return "unknown";
}

PromptSource SourceFor(Strategy s) {
  switch (s) {
    case Strategy::kLlm: return PromptSource::kExtraction;
    case Strategy::kPname: return PromptSource::kProductName;
    case Strategy::kPtype: return PromptSource::kProductType;
  }
  return PromptSource::kProductName;
}

ImagePrompt BuildPrompt(const Product& product, Strategy strategy,
                        const ExtractionResult* extraction,
                        std::string_view suffix) {
  ImagePrompt prompt;
  prompt.product_id = product.product_id;
  prompt.strategy = strategy;
  prompt.source = SourceFor(strategy);
  switch (strategy) {
    case Strategy::kLlm:
      if (extraction == nullptr || extraction->sanitized_output.empty()) {
        throw Error(ErrorKind::kMissingExtraction,
                    "LLM strategy needs an extraction for product " +
                        product.product_id);
      }
      prompt.text = extraction->sanitized_output;
      break;
    case Strategy::kPname:
      prompt.text = product.name;
      break;
    case Strategy::kPtype:
      prompt.text = product.product_type;
      break;
  }
  prompt.text.append(suffix);
  return prompt;
}

}  // namespace bannerforge
