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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "bannerforge/error.h"
#include "bannerforge/human_eval.h"
#include "bannerforge/jsonl.h"
#include "test_support.h"

namespace bannerforge {
namespace {

using testing::BruteForceGridMean;
using testing::FixedClock;
using testing::MakeGrid;
using testing::TempDir;

std::shared_ptr<SurveyManifest> SmallManifest(std::size_t products) {
  auto m = std::make_shared<SurveyManifest>();
  m->seed = 5;
  for (std::size_t k = 0; k < products; ++k) {
    SurveyTask t;
    t.product_id = testing::ProductId(k);
    t.product_name = "Product " + std::to_string(k);
    for (std::size_t s = 0; s < 3; ++s) t.image_hash[s] = std::string(63, 'a') + char('0' + s);
    m->tasks.push_back(t);
  }
  return m;
}

Rating FromValue(int v) { return v == 1 ? Rating::kLow : v == 2 ? Rating::kMedium : Rating::kHigh; }

TEST(Rating, TokensAndValues) {
  EXPECT_EQ(RatingValue(ParseRating("low")), 1);
  EXPECT_EQ(RatingValue(ParseRating("medium")), 2);
  EXPECT_EQ(RatingValue(ParseRating("high")), 3);
  try {
    ParseRating("excellent");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidRating);
    const std::string msg = e.what();
    for (const char* tok : {"low", "medium", "high"}) EXPECT_NE(msg.find(tok), std::string::npos);
  }
}

TEST(CreateSurvey, FifteenProducts) {
  std::vector<Product> products;
  std::vector<GenerationRecord> records;
  for (int k = 0; k < 15; ++k) {
    products.push_back({"p" + std::to_string(k), "name", "t", "c"});
    for (Strategy s : kAllStrategies) {
      GenerationRecord r;
      r.product_id = products.back().product_id;
      r.strategy = s;
      r.image_hash = std::to_string(k) + std::string(StrategyName(s));
      records.push_back(r);
    }
  }
  const auto m = CreateSurvey(products, records, 1);
  EXPECT_EQ(m.tasks.size(), 15u);
  std::set<std::string> refs;
  for (const auto& t : m.tasks) refs.insert(t.image_hash.begin(), t.image_hash.end());
  EXPECT_EQ(refs.size(), 45u);
  const auto back = SurveyManifestFromJson(ToJson(m));
  EXPECT_EQ(back.tasks.size(), 15u);
  EXPECT_EQ(back.tasks[3].image_hash, m.tasks[3].image_hash);

  records.erase(std::remove_if(records.begin(), records.end(),
                               [](const auto& r) { return r.product_id == "p7" && r.strategy == Strategy::kPtype; }),
                records.end());
  try {
    CreateSurvey(products, records, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingImage);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("p7"), std::string::npos);
    EXPECT_NE(msg.find("PTYPE"), std::string::npos);
  }
}

TEST(Blinding, SlotOrderIsPermutationAndVaries) {
  std::set<std::array<Strategy, 3>> seen;
  for (int j = 0; j < 40; ++j) {
    const auto rater = testing::RaterId(j);
    const auto order = SlotOrder(rater, "p-1", 5);
    std::set<Strategy> distinct(order.begin(), order.end());
    EXPECT_EQ(distinct.size(), 3u);
    EXPECT_EQ(order, SlotOrder(rater, "p-1", 5));
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(ResolveSlot(rater, "p-1", kSlotIds[k], 5), order[k]);
    seen.insert(order);
  }
  EXPECT_GT(seen.size(), 3u);
  EXPECT_THROW(ResolveSlot("r", "p", "d", 5), Error);
}

TEST(Blinding, ManifestHidesStrategies) {
  const auto blinded = BlindedManifest(*SmallManifest(3), "rater-x").dump();
  for (Strategy s : kAllStrategies) {
    EXPECT_EQ(blinded.find(std::string(StrategyName(s))), std::string::npos);
  }
}

TEST(RatingStore, OverwriteKeepsAudit) {
  TempDir dir;
  auto manifest = SmallManifest(2);
  {
    RatingStore store(manifest, dir / "ratings.jsonl", FixedClock());
    store.Record({"r1", "p-0", Strategy::kLlm, Rating::kLow, ""});
    const auto second = store.Record({"r1", "p-0", Strategy::kLlm, Rating::kHigh, ""});
    EXPECT_EQ(second.submitted_at, "2026-09-21T14:13:20Z");
    EXPECT_EQ(store.Snapshot().size(), 1u);
    EXPECT_EQ(store.Snapshot()[0].rating, Rating::kHigh);
    EXPECT_EQ(store.AuditCount("r1", "p-0", Strategy::kLlm), 2u);
    EXPECT_THROW(store.Record({"r1", "nope", Strategy::kLlm, Rating::kLow, ""}), Error);
    EXPECT_THROW(store.Record({"", "p-0", Strategy::kLlm, Rating::kLow, ""}), Error);
  }
  EXPECT_EQ(ReadJsonl(dir / "ratings.jsonl").size(), 2u);
  const auto effective = ReadRatingsLedger(dir / "ratings.jsonl");
  ASSERT_EQ(effective.size(), 1u);
  EXPECT_EQ(effective[0].rating, Rating::kHigh);
  RatingStore reopened(manifest, dir / "ratings.jsonl", FixedClock());
  EXPECT_EQ(reopened.AuditCount("r1", "p-0", Strategy::kLlm), 2u);
}

TEST(MethodScore, AllHigh) {
  const auto grid = MakeGrid(4, 3, [](auto, auto, auto) { return Rating::kHigh; });
  const auto s = ComputeMethodScore(grid, Strategy::kPname);
  EXPECT_EQ(s.mean, 3.0);
  EXPECT_EQ(s.std_dev, 0.0);
  EXPECT_EQ(s.n, 12u);
}

TEST(MethodScore, TwoByTwo) {
  const int values[2][2] = {{1, 2}, {2, 3}};
  const auto grid = MakeGrid(2, 2, [&](std::size_t j, std::size_t k, Strategy) {
    return FromValue(values[j][k]);
  });
  EXPECT_DOUBLE_EQ(ComputeMethodScore(grid, Strategy::kLlm).mean, 2.0);
}

TEST(MethodScore, IncompleteGridNamesCells) {
  auto grid = MakeGrid(2, 2, [](auto, auto, auto) { return Rating::kMedium; });
  grid.erase(std::remove_if(grid.begin(), grid.end(), [](const RatingRecord& r) {
               return r.rater_id == "rater-1" && r.product_id == "p-0" && r.method == Strategy::kLlm;
             }),
             grid.end());
  try {
    ComputeMethodScore(grid, Strategy::kLlm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIncompleteGrid);
    EXPECT_NE(std::string(e.what()).find("(rater-1, p-0)"), std::string::npos);
  }
  EXPECT_NO_THROW(ComputeMethodScore(grid, Strategy::kPname));
  const auto report = SurveyReport(grid);
  EXPECT_TRUE(report["methods"]["LLM"]["grid_score"].is_null());
  EXPECT_EQ(report["methods"]["LLM"]["available_cells"]["n"], 3);
  EXPECT_FALSE(report["completion"]["complete"].get<bool>());
  ASSERT_EQ(report["completion"]["missing"].size(), 1u);
  EXPECT_EQ(report["completion"]["missing"][0]["method"], "LLM");
  EXPECT_FALSE(report["completion"]["matrix"]["rater-1"]["p-0"]["LLM"].get<bool>());
}

TEST(MethodScore, RandomGridsMatchDoubleSum) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t raters = 1 + gen() % 24, products = 1 + gen() % 15;
    std::vector<std::vector<int>> values(raters, std::vector<int>(products));
    for (auto& row : values) {
      for (auto& v : row) v = 1 + static_cast<int>(gen() % 3);
    }
    const auto grid = MakeGrid(raters, products, [&](std::size_t j, std::size_t k, Strategy s) {
      return s == Strategy::kPtype ? FromValue(values[j][k]) : Rating::kLow;
    });
    const auto score = ComputeMethodScore(grid, Strategy::kPtype);
    EXPECT_NEAR(score.mean, BruteForceGridMean(values), 1e-12);
    EXPECT_GE(score.mean, 1.0);
    EXPECT_LE(score.mean, 3.0);
  }
}

TEST(MethodScore, LowToHighRaisesMeanByTwoOverCells) {
  std::mt19937_64 gen(8);
  const std::size_t J = 24, K = 15;
  auto grid = MakeGrid(J, K, [&](auto, auto, auto) { return FromValue(1 + gen() % 3); });
  auto low = std::find_if(grid.begin(), grid.end(), [](const RatingRecord& r) {
    return r.method == Strategy::kLlm && r.rating == Rating::kLow;
  });
  ASSERT_NE(low, grid.end());
  const double before = ComputeMethodScore(grid, Strategy::kLlm).mean;
  low->rating = Rating::kHigh;
  EXPECT_NEAR(ComputeMethodScore(grid, Strategy::kLlm).mean - before, 2.0 / (J * K), 1e-12);
}

TEST(ProductScores, StandardError) {
  std::vector<RatingRecord> r = {{"a", "x", Strategy::kLlm, Rating::kHigh, ""},
                                 {"b", "x", Strategy::kLlm, Rating::kHigh, ""},
                                 {"c", "x", Strategy::kLlm, Rating::kHigh, ""},
                                 {"a", "y", Strategy::kLlm, Rating::kLow, ""},
                                 {"b", "y", Strategy::kLlm, Rating::kHigh, ""},
                                 {"a", "z", Strategy::kLlm, Rating::kMedium, ""}};
  const auto scores = ComputePerProductScores(r);
  ASSERT_EQ(scores.cells.size(), 3u);
  EXPECT_EQ(scores.cells[0].mean, 3.0);
  EXPECT_EQ(scores.cells[0].standard_error, 0.0);
  EXPECT_DOUBLE_EQ(scores.cells[1].mean, 2.0);
  EXPECT_NEAR(scores.cells[1].standard_error, 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(scores.cells[2].standard_error, 0.0);
  EXPECT_EQ(scores.missing.size(), 6u);  // PNAME and PTYPE for x, y, z
}

TEST(SurveyReport, Empty) {
  const auto report = SurveyReport({});
  EXPECT_EQ(report["rating_count"], 0);
  EXPECT_EQ(report["rater_count"], 0);
  EXPECT_TRUE(report["per_product"].empty());
  for (Strategy s : kAllStrategies) {
    EXPECT_EQ(report["methods"][std::string(StrategyName(s))]["available_cells"]["n"], 0);
  }
}

TEST(SurveyReport, PublishedTableFromCraftedGrid) {
  const auto grid = testing::CraftedPublishedGrid();
  const auto report = SurveyReport(grid);
  EXPECT_TRUE(report["completion"]["complete"].get<bool>());
  EXPECT_EQ(FormatMethodTable(report),
            "Method  Mean score  Std. dev.\n"
            "LLM          2.077      0.834\n"
            "PNAME        2.413      0.771\n"
            "PTYPE        1.227      0.555\n");
}

}  // namespace
}  // namespace bannerforge
