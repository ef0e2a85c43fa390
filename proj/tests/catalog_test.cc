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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "bannerforge/catalog.h"
#include "bannerforge/error.h"
#include "bannerforge/jsonl.h"
#include "test_support.h"

namespace bannerforge {
namespace {

using testing::DataPath;
using testing::TempDir;

template <typename Fn>
ErrorKind KindOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::kConfig;
}

Catalog OneOf(std::vector<std::string> names) {
  std::vector<Product> products;
  for (std::size_t i = 0; i < names.size(); ++i) {
    products.push_back({"id" + std::to_string(i), names[i], "t", "c"});
  }
  return Catalog(std::move(products));
}

TEST(CatalogIngest, ThreeRowCsv) {
  const auto c = ParseCatalog(
      "product_id,name,product_type,cohort\n"
      "1,Dog bed,pet beds,pet-owner\n"
      "2,\"Rug, gray\",area rugs,home-decor\n"
      "3,Cabinet,furniture,\n",
      CatalogFormat::kCsv);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.products()[1].name, "Rug, gray");
  EXPECT_EQ(c.Find("3")->cohort, "furniture");  // empty cohort defaults to type
}

TEST(CatalogIngest, ColumnsInAnyOrderAndQuotedNewlines) {
  const auto c = ParseCatalog(
      "\xEF\xBB\xBF" "cohort,product_type,name,product_id\r\n"
      "x,t,\"two\nlines \"\"quoted\"\"\",a\r\n",
      CatalogFormat::kCsv);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.products()[0].product_id, "a");
  EXPECT_EQ(c.products()[0].name, "two\nlines \"quoted\"");
}

TEST(CatalogIngest, DuplicateIdNamesTheId) {
  try {
    ParseCatalog("product_id,name,product_type,cohort\nsku9,a,t,c\nsku9,b,t,c\n",
                 CatalogFormat::kCsv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDuplicateId);
    EXPECT_NE(std::string(e.what()).find("sku9"), std::string::npos);
  }
}

TEST(CatalogIngest, JsonlMissingNameReportsLine) {
  try {
    ParseCatalog(
        "{\"product_id\":\"1\",\"name\":\"a\",\"product_type\":\"t\",\"cohort\":\"c\"}\n"
        "{\"product_id\":\"2\",\"product_type\":\"t\",\"cohort\":\"c\"}\n",
        CatalogFormat::kJsonl);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingField);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("name"), std::string::npos) << msg;
  }
}

TEST(CatalogIngest, RejectsStructuralProblems) {
  EXPECT_EQ(KindOf([] { ParseCatalog("product_id,name,product_type\n1,a,t\n", CatalogFormat::kCsv); }),
            ErrorKind::kMissingField);
  EXPECT_EQ(KindOf([] {
              ParseCatalog("product_id,name,product_type,cohort\n1,\"open,t,c\n",
                           CatalogFormat::kCsv);
            }),
            ErrorKind::kParse);
  EXPECT_EQ(KindOf([] {
              ParseCatalog("product_id,name,product_type,cohort\n1,a,t\n", CatalogFormat::kCsv);
            }),
            ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { ParseCatalog("product_id,name,product_type,cohort\n1, ,t,c\n", CatalogFormat::kCsv); }),
            ErrorKind::kMissingField);
  EXPECT_EQ(KindOf([] {
              ParseCatalog("product_id,name,product_type,cohort\n1," + std::string(1001, 'a') + ",t,c\n",
                           CatalogFormat::kCsv);
            }),
            ErrorKind::kInvalidArgument);
}

TEST(CatalogIngest, FormatFromExtension) {
  EXPECT_EQ(FormatFromPath("x/cat.CSV"), CatalogFormat::kCsv);
  EXPECT_EQ(FormatFromPath("cat.jsonl"), CatalogFormat::kJsonl);
  EXPECT_EQ(ParseCatalogFormat("jsonl"), CatalogFormat::kJsonl);
}

TEST(CatalogIngest, BundledSampleCatalog) {
  const auto c = IngestCatalog(DataPath("sample_catalog.csv"), CatalogFormat::kCsv);
  EXPECT_EQ(c.OfType("pet beds").size(), 15u);
  EXPECT_EQ(c.Find("gc-003")->cohort, "game controllers");
}

TEST(CatalogIngest, RoundTripsBothFormats) {
  const auto c = IngestCatalog(DataPath("sample_catalog.csv"), CatalogFormat::kCsv);
  for (auto fmt : {CatalogFormat::kCsv, CatalogFormat::kJsonl}) {
    const auto text = SerializeCatalog(c, fmt);
    EXPECT_EQ(ParseCatalog(text, fmt), c);
    TempDir dir;
    WriteFileText(dir / "c.out", text);
    EXPECT_EQ(IngestCatalog(dir / "c.out", fmt), c);
  }
}

TEST(WordCountStats, SingleItem) {
  const auto s = ComputeWordCountStats(OneOf({"a b c"}));
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.std_dev, 0.0);
  EXPECT_EQ(s.min, 3u);
  EXPECT_EQ(s.max, 3u);
}

TEST(WordCountStats, PopulationStd) {
  const auto s = ComputeWordCountStats(OneOf({"a b", "a b c d"}));
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.std_dev, 1.0);
  EXPECT_EQ(s.min, 2u);
  EXPECT_EQ(s.max, 4u);
}

TEST(WordCountStats, WhitespaceRuns) {
  const auto s = ComputeWordCountStats(OneOf({"  a\t\tb \n c  "}));
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
}

TEST(WordCountStats, EmptyCatalog) {
  EXPECT_EQ(KindOf([] { ComputeWordCountStats(Catalog{}); }), ErrorKind::kEmptyInput);
}

TEST(WordCountStats, JsonShape) {
  const auto j = ToJson(ComputeWordCountStats(OneOf({"a b", "a b c d"})));
  for (const char* key : {"mean", "std_dev", "min", "max", "count"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(SampleItems, ExhaustiveAndDeterministic) {
  const auto c = IngestCatalog(DataPath("sample_catalog.csv"), CatalogFormat::kCsv);
  const auto a = SampleItems(c, "area rugs", 4, 11);
  const auto b = SampleItems(c, "area rugs", 4, 11);
  EXPECT_EQ(a, b);
  std::set<std::string> ids;
  for (const auto& p : a) ids.insert(p.product_id);
  EXPECT_EQ(ids, (std::set<std::string>{"rg-001", "rg-002", "rg-003", "rg-004"}));
}

TEST(SampleItems, Errors) {
  const auto c = OneOf({"a", "b"});
  EXPECT_EQ(KindOf([&] { SampleItems(c, "t", 3, 0); }), ErrorKind::kInsufficientItems);
  EXPECT_EQ(KindOf([&] { SampleItems(c, "none", 1, 0); }), ErrorKind::kInsufficientItems);
}

// Each item lands in a 1-of-4 sample from 16 with probability 1/4.
TEST(SampleItems, UniformOverSeeds) {
  std::vector<std::string> names(16, "x");
  const auto c = OneOf(names);
  std::map<std::string, int> hits;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    for (const auto& p : SampleItems(c, "t", 4, seed)) ++hits[p.product_id];
  }
  for (const auto& [id, n] : hits) EXPECT_NEAR(n, 2500, 150) << id;
}

TEST(WordCountStats, MatchesBruteForceOnRandomCatalogs) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> names;
    std::vector<double> counts;
    const int n = 1 + static_cast<int>(gen() % 40);
    for (int i = 0; i < n; ++i) {
      const int words = 1 + static_cast<int>(gen() % 30);
      std::string name;
      for (int w = 0; w < words; ++w) name += (gen() % 2 ? "  w" : "\tw") + std::to_string(w);
      names.push_back(name);
      counts.push_back(words);
    }
    double sum = 0;
    for (double v : counts) sum += v;
    const double mean = sum / n;
    double ss = 0;
    for (double v : counts) ss += (v - mean) * (v - mean);
    const auto s = ComputeWordCountStats(OneOf(names));
    EXPECT_NEAR(s.mean, mean, 1e-12);
    EXPECT_NEAR(s.std_dev, std::sqrt(ss / n), 1e-12);
    EXPECT_EQ(s.min, *std::min_element(counts.begin(), counts.end()));
    EXPECT_EQ(s.max, *std::max_element(counts.begin(), counts.end()));
  }
}

}  // namespace
}  // namespace bannerforge
