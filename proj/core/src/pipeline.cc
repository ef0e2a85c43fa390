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

#include "bannerforge/pipeline.h"

#include <algorithm>

#include "bannerforge/bounded_pool.h"
#include "bannerforge/error.h"
#include "bannerforge/util.h"

namespace bannerforge {

nlohmann::json ToJson(const RunSummary& s) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : s.failures) {
    failures.push_back({{"product_id", f.product_id},
                        {"strategy", f.strategy ? nlohmann::json(StrategyName(*f.strategy))
                                                : nlohmann::json(nullptr)},
                        {"stage", f.stage},
                        {"error", ErrorKindName(f.kind)},
                        {"message", f.message}});
  }
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : s.records) {
    records.push_back({{"record_id", r.record_id},
                       {"product_id", r.product_id},
                       {"strategy", StrategyName(r.strategy)},
                       {"image_hash", r.image_hash}});
  }
  std::size_t flagged = 0;
  for (const auto& f : s.failures) flagged += f.stage == "extract" ? 1 : 0;
  return {{"sampled", s.sampled.size()},
          {"extractions", s.extractions.size()},
          {"attempted_generations", s.attempted_generations},
          {"generated", s.records.size()},
          {"flagged_products", flagged},
          {"failure_count", s.failures.size()},
          {"failures", failures},
          {"records", records}};
}

std::int64_t GenerationSeed(std::uint64_t run_seed, std::string_view product_id) {
  return static_cast<std::int64_t>(Fnv1a64(product_id, 0xcbf29ce484222325ULL ^ run_seed) >> 1);
}

RunSummary RunPipeline(const RunContext& ctx, const RunOptions& options) {
  RunSummary summary;
  summary.sampled = SampleItems(ctx.catalog, options.product_type, options.n, options.seed);
  const auto& products = summary.sampled;
  const bool wants_llm = std::find(options.strategies.begin(), options.strategies.end(),
                                   Strategy::kLlm) != options.strategies.end();

  // Extraction, one slot per product.
  std::vector<std::optional<ExtractionResult>> extractions(products.size());
  std::vector<std::optional<RunFailure>> extraction_failures(products.size());
  if (wants_llm) {
    RunBounded(products.size(), options.max_inflight, [&](std::size_t i) {
      try {
        extractions[i] = ExtractAttributes(products[i], ctx.prompt_template, ctx.textgen,
                                           options.extraction, nullptr);
      } catch (const Error& e) {
        extraction_failures[i] =
            RunFailure{products[i].product_id, std::nullopt, "extract", e.kind(), e.what()};
      }
    });
  }

  struct Job {
    ImagePrompt prompt;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < products.size(); ++i) {
    if (ctx.extraction_ledger && extractions[i]) {
      ctx.extraction_ledger->Append(ToJson(*extractions[i]));
    } else if (ctx.extraction_ledger && extraction_failures[i]) {
      ctx.extraction_ledger->Append({{"product_id", products[i].product_id},
                                     {"error", ErrorKindName(extraction_failures[i]->kind)},
                                     {"message", extraction_failures[i]->message}});
    }
    if (extraction_failures[i]) summary.failures.push_back(*extraction_failures[i]);
    if (extractions[i]) summary.extractions.push_back(*extractions[i]);
    for (Strategy s : options.strategies) {
      if (s == Strategy::kLlm && !extractions[i]) continue;
      jobs.push_back({BuildPrompt(products[i], s,
                                  extractions[i] ? &*extractions[i] : nullptr,
                                  options.prompt_suffix)});
    }
  }

  summary.attempted_generations = jobs.size();
  std::vector<std::optional<GenerationRecord>> records(jobs.size());
  std::vector<std::optional<RunFailure>> generation_failures(jobs.size());
  RunBounded(jobs.size(), options.max_inflight, [&](std::size_t i) {
    try {
      GenParams params = options.gen_defaults;
      params.seed = GenerationSeed(options.seed, jobs[i].prompt.product_id);
      records[i] = GenerateImage(jobs[i].prompt, params, ctx.imagegen, ctx.store,
                                 options.generation, nullptr);
    } catch (const Error& e) {
      generation_failures[i] = RunFailure{jobs[i].prompt.product_id, jobs[i].prompt.strategy,
                                          "generate", e.kind(), e.what()};
    }
  });

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (records[i]) {
      try {
        ctx.ledger.Append(*records[i]);
        summary.records.push_back(*records[i]);
      } catch (const Error& e) {
        summary.failures.push_back({records[i]->product_id, records[i]->strategy,
                                    "generate", e.kind(), e.what()});
      }
    } else if (generation_failures[i]) {
      summary.failures.push_back(*generation_failures[i]);
    }
  }
  return summary;
}

}  // namespace bannerforge
