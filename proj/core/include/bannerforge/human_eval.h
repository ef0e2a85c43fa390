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

#ifndef BANNERFORGE_HUMAN_EVAL_H_
#define BANNERFORGE_HUMAN_EVAL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "bannerforge/catalog.h"
#include "bannerforge/image_gen.h"
#include "bannerforge/jsonl.h"
#include "bannerforge/prompt_builder.h"
#include "bannerforge/util.h"

namespace bannerforge {

enum class Rating { kLow, kMedium, kHigh };

// The only place rating tokens become numbers: low 1, medium 2, high 3.
int RatingValue(Rating rating);
std::string_view RatingToken(Rating rating);
// Throws Error(kInvalidRating) naming the three legal tokens.
Rating ParseRating(std::string_view token);

struct RatingRecord {
  std::string rater_id;
  std::string product_id;
  Strategy method = Strategy::kLlm;
  Rating rating = Rating::kMedium;
  std::string submitted_at;
};

nlohmann::json ToJson(const RatingRecord& record);
RatingRecord RatingRecordFromJson(const nlohmann::json& j);

struct SurveyTask {
  std::string product_id;
  std::string product_name;
  std::array<std::string, 3> image_hash;  // indexed by Strategy
};

// Canonical survey: one task per product with the image of every strategy.
// The strategy mapping stays server-side; raters see BlindedManifest output.
struct SurveyManifest {
  std::uint64_t seed = 0;
  std::vector<SurveyTask> tasks;

  const SurveyTask* Find(std::string_view product_id) const;
};

// Uses the latest ledger record per (product, strategy). Throws
// Error(kMissingImage) naming the product and strategy that has no image.
SurveyManifest CreateSurvey(std::span<const Product> products,
                            std::span<const GenerationRecord> records,
                            std::uint64_t seed = 0);

nlohmann::json ToJson(const SurveyManifest& manifest);
SurveyManifest SurveyManifestFromJson(const nlohmann::json& j);

inline constexpr std::array<std::string_view, 3> kSlotIds = {"a", "b", "c"};

// Slot order for one rater and product: a permutation of the strategies,
// deterministic in (rater_id, product_id, seed). Slot k shows order[k].
std::array<Strategy, 3> SlotOrder(std::string_view rater_id,
                                  std::string_view product_id, std::uint64_t seed);
// Throws Error(kUnknownTask) for slot ids other than a/b/c.
Strategy ResolveSlot(std::string_view rater_id, std::string_view product_id,
                     std::string_view slot_id, std::uint64_t seed);

// Rater-facing view: product names and opaque slots with image hashes only.
nlohmann::json BlindedManifest(const SurveyManifest& manifest,
                               std::string_view rater_id);

// Effective ratings keyed by (rater, product, method); later submissions
// overwrite earlier ones. Every submission is appended to the ledger, which
// doubles as the audit trail.
class RatingStore {
 public:
  RatingStore(std::shared_ptr<const SurveyManifest> manifest,
              std::optional<std::filesystem::path> ledger_path, Clock clock = SystemClock());

  // Validates the record against the manifest (Error(kUnknownTask)) and
  // stamps submitted_at when it is empty.
  RatingRecord Record(RatingRecord record);

  std::vector<RatingRecord> Snapshot() const;
  std::size_t AuditCount(std::string_view rater_id, std::string_view product_id,
                         Strategy method) const;
  const SurveyManifest* manifest() const { return manifest_.get(); }

 private:
  using Key = std::tuple<std::string, std::string, Strategy>;
  std::shared_ptr<const SurveyManifest> manifest_;
  std::unique_ptr<JsonlWriter> ledger_;
  Clock clock_;
  mutable std::mutex mu_;
  std::map<Key, RatingRecord> effective_;
  std::map<Key, std::size_t> audit_;
};

// Effective records from a ratings ledger (last submission wins).
std::vector<RatingRecord> ReadRatingsLedger(const std::filesystem::path& path);

struct MethodScore {
  Strategy method = Strategy::kLlm;
  double mean = 0.0;
  double std_dev = 0.0;  // population, over all grid cells
  std::size_t n = 0;
};

struct GridCell {
  std::string rater_id;
  std::string product_id;
};

// Mean over the complete rater x product grid for `method`. Throws
// Error(kEmptyInput) without ratings and Error(kIncompleteGrid) listing the
// missing (rater, product) cells.
MethodScore ComputeMethodScore(std::span<const RatingRecord> ratings, Strategy method);

// Missing cells of the rater x product grid spanned by `method`'s ratings.
std::vector<GridCell> MissingCells(std::span<const RatingRecord> ratings, Strategy method);

struct ProductScore {
  std::string product_id;
  Strategy method = Strategy::kLlm;
  double mean = 0.0;
  double standard_error = 0.0;  // population std / sqrt(n)
  std::size_t n = 0;
};

struct ProductScores {
  std::vector<ProductScore> cells;
  // (product, method) pairs with no ratings for products that have some.
  std::vector<std::pair<std::string, Strategy>> missing;
};

ProductScores ComputePerProductScores(std::span<const RatingRecord> ratings);

// Method scores (grid mean when the grid is complete, plus a labelled mean over
// available cells), the per-product table, rater count and completion matrix.
nlohmann::json SurveyReport(std::span<const RatingRecord> ratings,
                            const SurveyManifest* manifest = nullptr);

// Method / mean / std table with three decimals, from a SurveyReport.
std::string FormatMethodTable(const nlohmann::json& report);

}  // namespace bannerforge

#endif  // BANNERFORGE_HUMAN_EVAL_H_
