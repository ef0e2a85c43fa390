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

#include "bannerforge/human_eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "bannerforge/error.h"

namespace bannerforge {
namespace {

struct Moments {
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t n = 0;
};

Moments ComputeMoments(std::span<const int> values) {
  Moments m;
  m.n = values.size();
  if (m.n == 0) return m;
  double sum = 0.0;
  for (int v : values) sum += v;
  m.mean = sum / static_cast<double>(m.n);
  double ss = 0.0;
  for (int v : values) ss += (v - m.mean) * (v - m.mean);
  m.std_dev = std::sqrt(ss / static_cast<double>(m.n));
  return m;
}

nlohmann::json MomentsJson(const Moments& m) {
  return {{"mean", m.mean}, {"std_dev", m.std_dev}, {"n", m.n}};
}

}  // namespace

int RatingValue(Rating rating) {
  switch (rating) {
    case Rating::kLow: return 1;
    case Rating::kMedium: return 2;
    case Rating::kHigh: return 3;
  }
  return 0;
}

std::string_view RatingToken(Rating rating) {
  switch (rating) {
    case Rating::kLow: return "low";
    case Rating::kMedium: return "medium";
    case Rating::kHigh: return "high";
  }
  return "";
}

Rating ParseRating(std::string_view token) {
  for (Rating r : {Rating::kLow, Rating::kMedium, Rating::kHigh}) {
    if (token == RatingToken(r)) return r;
  }
  throw Error(ErrorKind::kInvalidRating,
              "invalid rating '" + std::string(token) +
                  "'; expected one of: low, medium, high");
}

nlohmann::json ToJson(const RatingRecord& r) {
  return {{"rater_id", r.rater_id},
          {"product_id", r.product_id},
          {"method", StrategyName(r.method)},
          {"rating", RatingToken(r.rating)},
          {"submitted_at", r.submitted_at}};
}

RatingRecord RatingRecordFromJson(const nlohmann::json& j) {
  RatingRecord r;
  r.rater_id = j.at("rater_id").get<std::string>();
  r.product_id = j.at("product_id").get<std::string>();
  r.method = ParseStrategy(j.at("method").get<std::string>());
  r.rating = ParseRating(j.at("rating").get<std::string>());
  r.submitted_at = j.value("submitted_at", "");
  return r;
}

const SurveyTask* SurveyManifest::Find(std::string_view product_id) const {
  for (const auto& t : tasks) {
    if (t.product_id == product_id) return &t;
  }
  return nullptr;
}

SurveyManifest CreateSurvey(std::span<const Product> products,
                            std::span<const GenerationRecord> records,
                            std::uint64_t seed) {
  SurveyManifest manifest;
  manifest.seed = seed;
  for (const auto& p : products) {
    SurveyTask task;
    task.product_id = p.product_id;
    task.product_name = p.name;
    for (const auto& r : records) {
      if (r.product_id == p.product_id) {
        task.image_hash[static_cast<std::size_t>(r.strategy)] = r.image_hash;
      }
    }
    for (Strategy s : kAllStrategies) {
      if (task.image_hash[static_cast<std::size_t>(s)].empty()) {
        throw Error(ErrorKind::kMissingImage,
                    "product " + p.product_id + " has no " +
                        std::string(StrategyName(s)) + " image in the ledger");
      }
    }
    manifest.tasks.push_back(std::move(task));
  }
  return manifest;
}

nlohmann::json ToJson(const SurveyManifest& manifest) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : manifest.tasks) {
    nlohmann::json images = nlohmann::json::object();
    for (Strategy s : kAllStrategies) {
      images[std::string(StrategyName(s))] = t.image_hash[static_cast<std::size_t>(s)];
    }
    tasks.push_back({{"product_id", t.product_id},
                     {"product_name", t.product_name},
                     {"images", images}});
  }
  return {{"seed", manifest.seed}, {"tasks", tasks}};
}

SurveyManifest SurveyManifestFromJson(const nlohmann::json& j) {
  SurveyManifest m;
  m.seed = j.value("seed", std::uint64_t{0});
  for (const auto& t : j.at("tasks")) {
    SurveyTask task;
    task.product_id = t.at("product_id").get<std::string>();
    task.product_name = t.at("product_name").get<std::string>();
    for (Strategy s : kAllStrategies) {
      task.image_hash[static_cast<std::size_t>(s)] =
          t.at("images").at(std::string(StrategyName(s))).get<std::string>();
    }
    m.tasks.push_back(std::move(task));
  }
  return m;
}

std::array<Strategy, 3> SlotOrder(std::string_view rater_id,
                                  std::string_view product_id, std::uint64_t seed) {
  const std::uint64_t mixed =
      seed ^ Fnv1a64(rater_id) ^ (Fnv1a64(product_id) * 0x9E3779B97F4A7C15ULL);
  SeededRng rng(mixed);
  std::array<Strategy, 3> order = kAllStrategies;
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.Below(i + 1)]);
  }
  return order;
}

Strategy ResolveSlot(std::string_view rater_id, std::string_view product_id,
                     std::string_view slot_id, std::uint64_t seed) {
  const auto order = SlotOrder(rater_id, product_id, seed);
  for (std::size_t k = 0; k < kSlotIds.size(); ++k) {
    if (slot_id == kSlotIds[k]) return order[k];
  }
  throw Error(ErrorKind::kUnknownTask, "unknown image slot '" + std::string(slot_id) +
                                           "'; expected a, b or c");
}

nlohmann::json BlindedManifest(const SurveyManifest& manifest,
                               std::string_view rater_id) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : manifest.tasks) {
    const auto order = SlotOrder(rater_id, t.product_id, manifest.seed);
    nlohmann::json slots = nlohmann::json::array();
    for (std::size_t k = 0; k < order.size(); ++k) {
      slots.push_back({{"slot", kSlotIds[k]},
                       {"image_hash", t.image_hash[static_cast<std::size_t>(order[k])]}});
    }
    tasks.push_back({{"product_id", t.product_id},
                     {"product_name", t.product_name},
                     {"slots", slots}});
  }
  return {{"rater_id", rater_id},
          {"ratings", {"low", "medium", "high"}},
          {"tasks", tasks}};
}

RatingStore::RatingStore(std::shared_ptr<const SurveyManifest> manifest,
                         std::optional<std::filesystem::path> ledger_path, Clock clock)
    : manifest_(std::move(manifest)), clock_(std::move(clock)) {
  if (ledger_path) {
    if (std::filesystem::exists(*ledger_path)) {
      for (const auto& [line, value] : ReadJsonl(*ledger_path)) {
        auto r = RatingRecordFromJson(value);
        Key key{r.rater_id, r.product_id, r.method};
        ++audit_[key];
        effective_[key] = std::move(r);
      }
    }
    ledger_ = std::make_unique<JsonlWriter>(*ledger_path);
  }
}

RatingRecord RatingStore::Record(RatingRecord record) {
  if (record.rater_id.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "rater_id must not be empty");
  }
  if (manifest_ && manifest_->Find(record.product_id) == nullptr) {
    throw Error(ErrorKind::kUnknownTask,
                "product " + record.product_id + " is not part of the survey");
  }
  if (record.submitted_at.empty()) record.submitted_at = FormatUtc(clock_());
  std::lock_guard lock(mu_);
  if (ledger_) ledger_->Append(ToJson(record));
  Key key{record.rater_id, record.product_id, record.method};
  ++audit_[key];
  effective_[key] = record;
  return record;
}

std::vector<RatingRecord> RatingStore::Snapshot() const {
  std::lock_guard lock(mu_);
  std::vector<RatingRecord> out;
  out.reserve(effective_.size());
  for (const auto& [key, record] : effective_) out.push_back(record);
  return out;
}

std::size_t RatingStore::AuditCount(std::string_view rater_id,
                                    std::string_view product_id, Strategy method) const {
  std::lock_guard lock(mu_);
  auto it = audit_.find(Key{std::string(rater_id), std::string(product_id), method});
  return it == audit_.end() ? 0 : it->second;
}

std::vector<RatingRecord> ReadRatingsLedger(const std::filesystem::path& path) {
  std::map<std::tuple<std::string, std::string, Strategy>, RatingRecord> effective;
  for (const auto& [line, value] : ReadJsonl(path)) {
    RatingRecord r;
    try {
      r = RatingRecordFromJson(value);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse,
                  path.string() + " line " + std::to_string(line) + ": " + e.what());
    }
    effective[{r.rater_id, r.product_id, r.method}] = r;
  }
  std::vector<RatingRecord> out;
  for (auto& [key, r] : effective) out.push_back(std::move(r));
  return out;
}

std::vector<GridCell> MissingCells(std::span<const RatingRecord> ratings, Strategy method) {
  std::set<std::string> raters, products;
  std::set<std::pair<std::string, std::string>> present;
  for (const auto& r : ratings) {
    if (r.method != method) continue;
    raters.insert(r.rater_id);
    products.insert(r.product_id);
    present.emplace(r.rater_id, r.product_id);
  }
  std::vector<GridCell> missing;
  for (const auto& j : raters) {
    for (const auto& k : products) {
      if (!present.count({j, k})) missing.push_back({j, k});
    }
  }
  return missing;
}

MethodScore ComputeMethodScore(std::span<const RatingRecord> ratings, Strategy method) {
  // One value per (rater, product); duplicates keep the last record.
  std::map<std::pair<std::string, std::string>, int> grid;
  for (const auto& r : ratings) {
    if (r.method == method) grid[{r.rater_id, r.product_id}] = RatingValue(r.rating);
  }
  if (grid.empty()) {
    throw Error(ErrorKind::kEmptyInput,
                "no ratings for method " + std::string(StrategyName(method)));
  }
  const auto missing = MissingCells(ratings, method);
  if (!missing.empty()) {
    std::string cells;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i) cells += ", ";
      cells += "(" + missing[i].rater_id + ", " + missing[i].product_id + ")";
    }
    throw Error(ErrorKind::kIncompleteGrid,
                "incomplete rating grid for " + std::string(StrategyName(method)) +
                    "; missing " + cells);
  }
  std::vector<int> values;
  values.reserve(grid.size());
  for (const auto& [cell, v] : grid) values.push_back(v);
  const auto m = ComputeMoments(values);
  return {method, m.mean, m.std_dev, m.n};
}

ProductScores ComputePerProductScores(std::span<const RatingRecord> ratings) {
  std::map<std::pair<std::string, Strategy>, std::vector<int>> cells;
  std::set<std::string> products;
  for (const auto& r : ratings) {
    cells[{r.product_id, r.method}].push_back(RatingValue(r.rating));
    products.insert(r.product_id);
  }
  ProductScores out;
  for (const auto& product : products) {
    for (Strategy s : kAllStrategies) {
      auto it = cells.find({product, s});
      if (it == cells.end()) {
        out.missing.emplace_back(product, s);
        continue;
      }
      const auto m = ComputeMoments(it->second);
      out.cells.push_back({product, s, m.mean,
                           m.n > 1 ? m.std_dev / std::sqrt(static_cast<double>(m.n)) : 0.0,
                           m.n});
    }
  }
  return out;
}

nlohmann::json SurveyReport(std::span<const RatingRecord> ratings,
                            const SurveyManifest* manifest) {
  nlohmann::json methods = nlohmann::json::object();
  for (Strategy s : kAllStrategies) {
    std::vector<int> available;
    for (const auto& r : ratings) {
      if (r.method == s) available.push_back(RatingValue(r.rating));
    }
    nlohmann::json entry;
    entry["available_cells"] = MomentsJson(ComputeMoments(available));
    entry["available_cells"]["note"] =
        "mean over whatever cells were rated; not the complete-grid score";
    entry["grid_score"] = nullptr;
    if (!available.empty()) {
      try {
        const auto score = ComputeMethodScore(ratings, s);
        entry["grid_score"] = {{"mean", score.mean},
                               {"std_dev", score.std_dev},
                               {"n", score.n}};
      } catch (const Error& e) {
        entry["grid_error"] = e.what();
      }
    }
    methods[std::string(StrategyName(s))] = std::move(entry);
  }

  const auto per_product = ComputePerProductScores(ratings);
  nlohmann::json table = nlohmann::json::array();
  for (const auto& c : per_product.cells) {
    table.push_back({{"product_id", c.product_id},
                     {"method", StrategyName(c.method)},
                     {"mean", c.mean},
                     {"standard_error", c.standard_error},
                     {"n", c.n}});
  }
  nlohmann::json missing_cells = nlohmann::json::array();
  for (const auto& [product, s] : per_product.missing) {
    missing_cells.push_back({{"product_id", product}, {"method", StrategyName(s)}});
  }

  std::set<std::string> raters;
  std::set<std::string> products;
  std::set<std::tuple<std::string, std::string, Strategy>> rated;
  for (const auto& r : ratings) {
    raters.insert(r.rater_id);
    products.insert(r.product_id);
    rated.emplace(r.rater_id, r.product_id, r.method);
  }
  if (manifest) {
    for (const auto& t : manifest->tasks) products.insert(t.product_id);
  }
  nlohmann::json missing = nlohmann::json::array();
  nlohmann::json matrix = nlohmann::json::object();
  for (const auto& j : raters) {
    for (const auto& k : products) {
      nlohmann::json row = nlohmann::json::object();
      for (Strategy s : kAllStrategies) {
        const bool done = rated.count({j, k, s}) > 0;
        row[std::string(StrategyName(s))] = done;
        if (!done) {
          missing.push_back({{"rater_id", j}, {"product_id", k}, {"method", StrategyName(s)}});
        }
      }
      matrix[j][k] = std::move(row);
    }
  }

  return {{"methods", methods},
          {"per_product", table},
          {"missing_product_cells", missing_cells},
          {"rater_count", raters.size()},
          {"rating_count", ratings.size()},
          {"completion",
           {{"raters", raters},
            {"products", products},
            {"matrix", matrix},
            {"missing", missing},
            {"complete", missing.empty()}}}};
}

std::string FormatMethodTable(const nlohmann::json& report) {
  std::string out = "Method  Mean score  Std. dev.\n";
  for (Strategy s : kAllStrategies) {
    const auto& entry = report.at("methods").at(std::string(StrategyName(s)));
    char line[96];
    if (!entry.at("grid_score").is_null()) {
      const auto& g = entry.at("grid_score");
      std::snprintf(line, sizeof(line), "%-7s %10.3f  %9.3f\n",
                    std::string(StrategyName(s)).c_str(), g.at("mean").get<double>(),
                    g.at("std_dev").get<double>());
    } else if (entry.at("available_cells").at("n").get<std::size_t>() > 0) {
      const auto& a = entry.at("available_cells");
      std::snprintf(line, sizeof(line), "%-7s %10.3f* %9.3f  (incomplete grid)\n",
                    std::string(StrategyName(s)).c_str(), a.at("mean").get<double>(),
                    a.at("std_dev").get<double>());
    } else {
      std::snprintf(line, sizeof(line), "%-7s %10s  %9s\n",
                    std::string(StrategyName(s)).c_str(), "-", "-");
    }
    out += line;
  }
  return out;
}

}  // namespace bannerforge
