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
#include <random>

#include "bannerforge/adherence.h"
#include "bannerforge/error.h"
#include "bannerforge/mock_backends.h"
#include "test_support.h"

namespace bannerforge {
namespace {

using testing::BruteForcePar;
using testing::RandomParBatch;

PromptObjects Labels(std::vector<std::string> labels, std::string id = "p") {
  return {std::move(id), std::move(labels)};
}

TEST(ExtractObjects, SubjectHeadNoun) {
  ExtractionResult ex{"rg", "", "x", AttributeTuple{"fluffy and light gray area rug", "k", "s"}, {}};
  const ImagePrompt prompt{"rg", Strategy::kLlm, "fluffy ... in the living room",
                           PromptSource::kExtraction};
  const auto objects = ExtractObjects(prompt, &ex);
  EXPECT_EQ(objects.labels, std::vector<std::string>{"rug"});
  EXPECT_EQ(objects.prompt_id, "rg/LLM");
}

TEST(ExtractObjects, LastPromptToken) {
  const ImagePrompt prompt{"pb", Strategy::kPtype, "pet beds", PromptSource::kProductType};
  EXPECT_EQ(ExtractObjects(prompt, nullptr).labels, std::vector<std::string>{"beds"});
  const ImagePrompt shouty{"pb", Strategy::kPname, "Dog Bed, Gray!", PromptSource::kProductName};
  EXPECT_EQ(ExtractObjects(shouty, nullptr, "custom").labels, std::vector<std::string>{"gray"});
}

TEST(ExtractObjects, EmptyLabel) {
  const ImagePrompt prompt{"x", Strategy::kPname, "!!!", PromptSource::kProductName};
  try {
    ExtractObjects(prompt, nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyLabel);
  }
}

TEST(Presence, Examples) {
  const std::vector<Detection> strong = {{"rug", 0.9}};
  const std::vector<Detection> weak = {{"rug", 0.3}};
  const std::vector<Detection> dog = {{"Dog", 0.8}};
  EXPECT_EQ(Presence(Labels({"rug"}), strong, 0.5), (std::map<std::string, int>{{"rug", 1}}));
  EXPECT_EQ(Presence(Labels({"rug"}), weak, 0.5), (std::map<std::string, int>{{"rug", 0}}));
  EXPECT_EQ(Presence(Labels({"rug", "dog"}), dog, 0.5),
            (std::map<std::string, int>{{"rug", 0}, {"dog", 1}}));
  EXPECT_EQ(Presence(Labels({"rug"}), weak, 0.3).at("rug"), 1);
  EXPECT_THROW(Presence(Labels({"rug"}), weak, 1.5), Error);
}

TEST(ParScore, Extremes) {
  std::vector<ParItem> all = {{Labels({"rug", "dog"}), {{"rug", 1.0}, {"dog", 0.6}}},
                              {Labels({"bed"}), {{"bed", 0.3}}}};
  EXPECT_EQ(ParScore(all), 1.0);
  for (auto& item : all) item.detections.clear();
  EXPECT_EQ(ParScore(all), 0.0);
}

TEST(ParScore, FlatMeanNotPerPromptMean) {
  // Label counts (1, 2, 1), presences (1, 1, 0, 0).
  const std::vector<ParItem> batch = {{Labels({"a"}, "p1"), {{"a", 0.9}}},
                                      {Labels({"b", "c"}, "p2"), {{"b", 0.9}}},
                                      {Labels({"d"}, "p3"), {}}};
  EXPECT_DOUBLE_EQ(ParScore(batch), 0.5);
  EXPECT_DOUBLE_EQ(PerPromptMeanPar(batch), 0.5);
  const std::vector<ParItem> skew = {{Labels({"a"}, "p1"), {{"a", 0.9}}},
                                     {Labels({"b", "c", "d"}, "p2"), {}}};
  EXPECT_DOUBLE_EQ(ParScore(skew), 0.25);
  EXPECT_DOUBLE_EQ(PerPromptMeanPar(skew), 0.5);
}

TEST(ParScore, Errors) {
  EXPECT_THROW(ParScore(std::vector<ParItem>{}), Error);
  EXPECT_THROW(ParScore(std::vector<ParItem>{{Labels({}), {}}}), Error);
  EXPECT_THROW(ParScore(std::vector<ParItem>{{Labels({"a", "a"}), {}}}), Error);
}

TEST(ParScore, MatchesBruteForceAndProperties) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto batch = RandomParBatch(gen, 100);
    const double par = ParScore(batch, 0.5);
    EXPECT_NEAR(par, BruteForcePar(batch, 0.5), 1e-15);
    EXPECT_GE(par, 0.0);
    EXPECT_LE(par, 1.0);

    auto permuted = batch;
    std::shuffle(permuted.begin(), permuted.end(), gen);
    EXPECT_NEAR(ParScore(permuted, 0.5), par, 1e-15);

    // Flip one absent label to present.
    for (auto& item : batch) {
      const auto presence = Presence(item.objects, item.detections, 0.5);
      const auto miss = std::find_if(presence.begin(), presence.end(),
                                     [](const auto& kv) { return kv.second == 0; });
      if (miss == presence.end()) continue;
      item.detections.push_back({miss->first, 0.99});
      EXPECT_GE(ParScore(batch, 0.5), par);
      break;
    }
  }
}

TEST(MockDetector, Deterministic) {
  const auto png = EncodePng(RenderProceduralImage("dog bed", 3, 32, 32));
  MockDetectorClient detector;
  const auto a = detector.Detect(png);
  const auto b = detector.Detect(png);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].label, b[i].label);
    EXPECT_EQ(a[i].confidence, b[i].confidence);
    EXPECT_GE(a[i].confidence, 0.0);
    EXPECT_LE(a[i].confidence, 1.0);
  }
}

}  // namespace
}  // namespace bannerforge
