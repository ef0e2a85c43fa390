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

#ifndef BANNERFORGE_PIPELINE_H_
#define BANNERFORGE_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bannerforge/attribute_extraction.h"
#include "bannerforge/catalog.h"
#include "bannerforge/image_gen.h"
#include "bannerforge/prompt_builder.h"

namespace bannerforge {

struct RunOptions {
  std::string product_type;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};
  GenParams gen_defaults;  // seed is replaced by GenerationSeed(seed, product_id)
  std::size_t max_inflight = 4;
  std::string prompt_suffix;
  ExtractionOptions extraction;
  GenerateOptions generation;
};

struct RunFailure {
  std::string product_id;
  std::optional<Strategy> strategy;  // absent for extraction failures
  std::string stage;                 // "extract" or "generate"
  ErrorKind kind = ErrorKind::kTransport;
  std::string message;
};

struct RunSummary {
  std::vector<Product> sampled;
  std::vector<ExtractionResult> extractions;
  std::vector<GenerationRecord> records;
  std::vector<RunFailure> failures;
  std::size_t attempted_generations = 0;

  // True when generations were attempted and none succeeded.
  bool total_failure() const {
    return attempted_generations > 0 && records.empty();
  }
};

nlohmann::json ToJson(const RunSummary& summary);

struct RunContext {
  const Catalog& catalog;
  const PromptTemplate& prompt_template;
  TextGenClient& textgen;
  ImageGenClient& imagegen;
  const ImageStore& store;
  RunLedger& ledger;
  JsonlWriter* extraction_ledger = nullptr;
};

// sample -> extract (LLM strategy only) -> build prompts -> generate -> ledger.
// Backend calls run on a bounded pool; ledger lines are appended in
// (sampled product, strategy) order so replays are byte-identical apart from
// timestamps. Per-item failures are collected, never thrown.
// Image seed for one product: shared by its strategies, distinct across products.
std::int64_t GenerationSeed(std::uint64_t run_seed, std::string_view product_id);

RunSummary RunPipeline(const RunContext& context, const RunOptions& options);

}  // namespace bannerforge

#endif  // BANNERFORGE_PIPELINE_H_
