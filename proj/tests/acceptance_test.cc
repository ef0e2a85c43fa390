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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "bannerforge/adherence.h"
#include "bannerforge/attribute_extraction.h"
#include "bannerforge/brisque.h"
#include "bannerforge/catalog.h"
#include "bannerforge/config.h"
#include "bannerforge/error.h"
#include "bannerforge/human_eval.h"
#include "bannerforge/image_gen.h"
#include "bannerforge/jsonl.h"
#include "bannerforge/mock_backends.h"
#include "bannerforge/personalization.h"
#include "bannerforge/pipeline.h"
#include "bannerforge/svr_model.h"
#include "test_support.h"

namespace bf = bannerforge;
namespace fs = std::filesystem;
using bf::testing::DataPath;
using bf::testing::FixturePath;

namespace {

// Collects failed expectations for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    if (ok()) return std::to_string(count_) + " checks";
    std::string s = std::to_string(failed_) + "/" + std::to_string(count_) + " failed: ";
    for (std::size_t i = 0; i < failures_.size(); ++i) s += (i ? "; " : "") + failures_[i];
    return s;
  }

 private:
  std::size_t count_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

int g_failed = 0;

void Criterion(const char* name, double limit_s, const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.Expect(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0) check.Expect(elapsed < limit_s, "runtime over limit");
  const bool ok = check.ok();
  g_failed += ok ? 0 : 1;
  if (limit_s > 0) {
    std::printf("%s  %-22s %.3fs (limit %.0fs)  %s\n", ok ? "PASS" : "FAIL", name, elapsed,
                limit_s, check.Summary().c_str());
  } else {
    std::printf("%s  %-22s %.3fs  %s\n", ok ? "PASS" : "FAIL", name, elapsed,
                check.Summary().c_str());
  }
  std::fflush(stdout);
}

std::string Fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void PromptGolden(Check& c) {
  const auto tmpl = bf::PromptTemplate::Parse(bf::BundledPromptTemplateText());
  const bf::Product peppa{"peppa", bf::ReadFileText(FixturePath("peppa_product_name.txt")),
                          "plush toys", ""};
  const auto expected = bf::ReadFileText(FixturePath("extraction_prompt_peppa.txt"));
  c.Expect(bf::RenderLlmPrompt(peppa, tmpl) == expected, "rendered prompt differs from fixture");
}

bf::Rating FromValue(int v) {
  return v == 1 ? bf::Rating::kLow : v == 2 ? bf::Rating::kMedium : bf::Rating::kHigh;
}

void MethodScoreOracle(Check& c) {
  std::mt19937_64 gen(2026);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t J = 1 + gen() % 24, K = 1 + gen() % 15;
    std::vector<std::vector<std::vector<int>>> values(
        3, std::vector<std::vector<int>>(J, std::vector<int>(K)));
    for (auto& m : values) {
      for (auto& row : m) {
        for (auto& v : row) v = 1 + static_cast<int>(gen() % 3);
      }
    }
    const auto grid = bf::testing::MakeGrid(J, K, [&](std::size_t j, std::size_t k, bf::Strategy s) {
      return FromValue(values[static_cast<std::size_t>(s)][j][k]);
    });
    for (bf::Strategy s : bf::kAllStrategies) {
      const double got = bf::ComputeMethodScore(grid, s).mean;
      const double want = bf::testing::BruteForceGridMean(values[static_cast<std::size_t>(s)]);
      c.Expect(std::abs(got - want) <= 1e-12, "grid " + std::to_string(trial) + ": " + Fmt(got) +
                                                  " vs " + Fmt(want));
    }
  }
  const auto high = bf::testing::MakeGrid(24, 15, [](auto, auto, auto) { return bf::Rating::kHigh; });
  for (bf::Strategy s : bf::kAllStrategies) {
    c.Expect(bf::ComputeMethodScore(high, s).mean == 3.0, "all-high grid is not exactly 3.0");
  }
  const auto table = bf::FormatMethodTable(bf::SurveyReport(bf::testing::CraftedPublishedGrid()));
  c.Expect(table ==
               "Method  Mean score  Std. dev.\n"
               "LLM          2.077      0.834\n"
               "PNAME        2.413      0.771\n"
               "PTYPE        1.227      0.555\n",
           "crafted grid table:\n" + table);
}

void BrisqueOracle(Check& c) {
  const auto ref =
      nlohmann::json::parse(bf::ReadFileText(FixturePath("brisque/reference_features.json")));
  std::size_t photos = 0;
  for (const auto& [name, want] : ref.at("features").items()) {
    const auto got =
        bf::brisque::ComputeFeatures(bf::brisque::LoadGray(FixturePath("brisque/" + name + ".png")));
    double worst = 0.0;
    for (int k = 0; k < bf::brisque::kFeatureCount; ++k) {
      worst = std::max(worst, std::abs(got[k] - want[k].get<double>()));
    }
    c.Expect(worst <= 1e-3, name + " max deviation " + Fmt(worst));
    ++photos;
  }
  c.Expect(photos >= 5, "fewer than 5 fixture photos");

  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(1'000'000);
  for (auto& v : x) v = normal(gen);
  const auto g = bf::brisque::FitGgd(x);
  c.Expect(std::abs(g.alpha - 2.0) <= 0.1, "gaussian alpha " + Fmt(g.alpha));
  for (auto& v : x) v = (gen() & 1 ? 1.0 : -1.0) * expo(gen);
  const auto l = bf::brisque::FitGgd(x);
  c.Expect(std::abs(l.alpha - 1.0) <= 0.05, "laplace alpha " + Fmt(l.alpha));

  bf::brisque::GrayImage flat{64, 48, std::vector<double>(64 * 48, 117.0)};
  bool zero = true;
  for (double v : bf::brisque::ComputeMscn(flat).data) zero &= v == 0.0;
  c.Expect(zero, "constant image MSCN not identically zero");
}

void SvrScoring(Check& c) {
  auto model = bf::brisque::LoadSvrModel(DataPath("toy_svr.model"), DataPath("toy_svr.range"));
  c.Expect(model.support_vectors.size() == 2, "toy model support vectors");
  const auto [mt, rt] = bf::brisque::SerializeSvrModel(model);
  const auto back = bf::brisque::ParseSvrModel(mt, rt);
  c.Expect(bf::brisque::SerializeSvrModel(back) == std::pair{mt, rt}, "round trip differs");
  bool same = back.gamma == model.gamma && back.rho == model.rho;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    same &= back.support_vectors[i].coefficient == model.support_vectors[i].coefficient &&
            back.support_vectors[i].features == model.support_vectors[i].features;
  }
  for (int k = 0; k < bf::brisque::kFeatureCount; ++k) {
    same &= back.ranges[k].lower == model.ranges[k].lower && back.ranges[k].upper == model.ranges[k].upper;
  }
  c.Expect(same, "parsed round trip values differ");

  double coef_sum = 0.0;
  for (const auto& sv : model.support_vectors) coef_sum += sv.coefficient;
  auto flat = model;
  flat.gamma = 0.0;
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 20; ++t) {
    bf::brisque::FeatureVector f;
    for (auto& v : f) v = u(gen);
    c.Expect(bf::brisque::Score(f, flat) == coef_sum - flat.rho, "gamma 0 score");
  }

  // One vector, identity scaling, features equal to the vector.
  auto single = model;
  single.rho = 0.0;
  single.support_vectors.resize(1);
  single.support_vectors[0].coefficient = 4.25;
  for (auto& r : single.ranges) r = {-1.0, 1.0};
  c.Expect(bf::brisque::Score(single.support_vectors[0].features, single) == 4.25,
           "zero-distance score");
}

void Par(Check& c) {
  std::mt19937_64 gen(100);
  for (int trial = 0; trial < 100; ++trial) {
    auto batch = bf::testing::RandomParBatch(gen, 100);
    const double par = bf::ParScore(batch, 0.5);
    c.Expect(std::abs(par - bf::testing::BruteForcePar(batch, 0.5)) <= 1e-15, "flat mean");
    auto all = batch, none = batch;
    for (auto& item : all) {
      item.detections.clear();
      for (const auto& l : item.objects.labels) item.detections.push_back({l, 1.0});
    }
    for (auto& item : none) item.detections.clear();
    c.Expect(bf::ParScore(all, 0.5) == 1.0, "all-present bound");
    c.Expect(bf::ParScore(none, 0.5) == 0.0, "all-absent bound");
    for (auto& item : batch) {
      const auto presence = bf::Presence(item.objects, item.detections, 0.5);
      for (const auto& [label, hit] : presence) {
        if (hit) continue;
        item.detections.push_back({label, 0.9});
        c.Expect(bf::ParScore(batch, 0.5) >= par, "monotone under single flip");
        item.detections.pop_back();
      }
    }
  }
}

void Personalization(Check& c) {
  std::mt19937_64 gen(1000);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    bf::UserAffinities user{"u" + std::to_string(trial), {}};
    const int cohorts = 1 + static_cast<int>(gen() % 10);
    for (int k = 0; k < cohorts; ++k) user.affinities["c" + std::to_string(k)] = std::round(u(gen) * 4) / 4;
    std::vector<bf::Product> items;
    const int n = 1 + static_cast<int>(gen() % 20);
    for (int i = 0; i < n; ++i) {
      items.push_back({"item" + std::to_string(gen() % 500), "n", "t",
                       "c" + std::to_string(gen() % (cohorts + 2))});
    }
    // Exhaustive: best (score, -cohort, -id) among known cohorts.
    const bf::Product* best = nullptr;
    double best_score = 0;
    for (const auto& p : items) {
      auto it = user.affinities.find(p.cohort);
      if (it == user.affinities.end()) continue;
      const bool better = !best || it->second > best_score ||
                          (it->second == best_score &&
                           std::tie(p.cohort, p.product_id) < std::tie(best->cohort, best->product_id));
      if (better) best = &p, best_score = it->second;
    }
    if (!best) {
      for (const auto& p : items) {
        if (!best || p.product_id < best->product_id) best = &p;
      }
    }
    const auto chosen = bf::SelectItem(user, items);
    c.Expect(chosen.product_id == best->product_id && chosen.cohort == best->cohort, "argmax");
    for (double a : {0.5, 7.0}) {
      for (double b : {-1.25, 3.0}) {
        auto t = user;
        for (auto& [k, v] : t.affinities) v = a * v + b;
        c.Expect(bf::SelectItem(t, items).product_id == chosen.product_id, "affine invariance");
      }
    }
  }
  const bf::UserAffinities tie{"t", {{"a", 0.7}, {"b", 0.7}}};
  const std::vector<bf::Product> cands = {{"p2", "n", "t", "b"}, {"p1", "n", "t", "a"}};
  c.Expect(bf::SelectItem(tie, cands).cohort == "a", "cohort tie-break");
  const std::vector<bf::Product> same = {{"p9", "n", "t", "a"}, {"p3", "n", "t", "a"}};
  c.Expect(bf::SelectItem(tie, same).product_id == "p3", "product id tie-break");
  const bf::UserAffinities none{"n", {{"zzz", 1.0}}};
  const auto fallback = bf::SelectItem(none, same);
  c.Expect(fallback.product_id == "p3" && fallback.affinity_used == 0.0, "fallback");
}

struct RunOutcome {
  bf::RunSummary summary;
  std::vector<bf::GenerationRecord> ledger;
  std::size_t pngs = 0;
};

RunOutcome RunMock(const fs::path& root, const std::vector<std::string>& fail_names) {
  const auto catalog = bf::IngestCatalog(DataPath("sample_catalog.csv"), bf::CatalogFormat::kCsv);
  const auto tmpl = bf::PromptTemplate::Parse(bf::BundledPromptTemplateText());
  bf::MockTextGenClient textgen;
  for (const auto& n : fail_names) textgen.FailOn(n);
  bf::MockImageGenClient imagegen;
  bf::ImageStore store(root / "images");
  RunOutcome out;
  {
    bf::RunLedger ledger(root / "run.jsonl");
    bf::RunOptions options;
    options.product_type = "pet beds";
    options.n = 15;
    options.seed = 42;
    out.summary = bf::RunPipeline({catalog, tmpl, textgen, imagegen, store, ledger}, options);
  }
  out.ledger = bf::ReadRunLedger(root / "run.jsonl");
  out.pngs = store.ListHashes().size();
  return out;
}

void EndToEnd(Check& c) {
  bf::testing::TempDir a, b, faulty;
  const auto first = RunMock(a.path(), {});
  c.Expect(first.summary.records.size() == 45, "records " + std::to_string(first.summary.records.size()));
  c.Expect(first.ledger.size() == 45, "ledger lines " + std::to_string(first.ledger.size()));
  c.Expect(first.pngs == 45, "stored pngs " + std::to_string(first.pngs));
  c.Expect(first.summary.failures.empty(), "unexpected failures");

  // Replay 1: same seed into a fresh store.
  const auto second = RunMock(b.path(), {});
  bool identical = second.ledger.size() == first.ledger.size();
  for (std::size_t i = 0; identical && i < first.ledger.size(); ++i) {
    identical = first.ledger[i].record_id == second.ledger[i].record_id &&
                first.ledger[i].image_hash == second.ledger[i].image_hash &&
                first.ledger[i].prompt_text == second.ledger[i].prompt_text;
  }
  c.Expect(identical, "re-run ledger differs");

  // Replay 2: regenerate every ledger record from its stored prompt and params.
  bf::MockImageGenClient imagegen;
  bf::testing::TempDir replay;
  bf::ImageStore store(replay.path());
  std::size_t matched = 0;
  for (const auto& r : first.ledger) {
    const auto rec = bf::GenerateImage({r.product_id, r.strategy, r.prompt_text, bf::SourceFor(r.strategy)},
                                       r.params, imagegen, store, {});
    matched += rec.image_hash == r.image_hash && rec.record_id == r.record_id;
  }
  c.Expect(matched == 45, "ledger replay matched " + std::to_string(matched) + "/45");

  const auto catalog = bf::IngestCatalog(DataPath("sample_catalog.csv"), bf::CatalogFormat::kCsv);
  const auto sampled = bf::SampleItems(catalog, "pet beds", 15, 42);
  const auto faults = RunMock(faulty.path(), {sampled[0].name, sampled[7].name, sampled[14].name});
  std::size_t flags = 0;
  for (const auto& f : faults.summary.failures) flags += f.stage == "extract" && !f.strategy;
  c.Expect(faults.summary.records.size() == 42, "fault run records " + std::to_string(faults.summary.records.size()));
  c.Expect(flags == 3 && faults.summary.failures.size() == 3, "fault run flags " + std::to_string(flags));
  c.Expect(!faults.summary.total_failure(), "fault run marked total failure");
}

void CatalogStats(Check& c) {
  std::mt19937_64 gen(721);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<bf::Product> products;
    std::vector<std::uint64_t> counts;
    const int n = 1 + static_cast<int>(gen() % 50);
    for (int i = 0; i < n; ++i) {
      const int words = 1 + static_cast<int>(gen() % 40);
      std::string name(gen() % 3, ' ');
      for (int w = 0; w < words; ++w) name += "w" + std::to_string(gen() % 100) + std::string(1 + gen() % 3, gen() % 2 ? ' ' : '\t');
      products.push_back({"id" + std::to_string(i), name, "t", "c"});
      counts.push_back(static_cast<std::uint64_t>(words));
    }
    double sum = 0;
    for (auto v : counts) sum += static_cast<double>(v);
    const double mean = sum / n;
    double ss = 0;
    for (auto v : counts) ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
    const auto s = bf::ComputeWordCountStats(bf::Catalog(products));
    c.Expect(std::abs(s.mean - mean) <= 1e-12 && std::abs(s.std_dev - std::sqrt(ss / n)) <= 1e-12 &&
                 s.min == *std::min_element(counts.begin(), counts.end()) &&
                 s.max == *std::max_element(counts.begin(), counts.end()) && s.count == counts.size(),
             "stats mismatch on trial " + std::to_string(trial));
  }
  const auto j = bf::ToJson(bf::ComputeWordCountStats(
      bf::IngestCatalog(DataPath("sample_catalog.csv"), bf::CatalogFormat::kCsv)));
  c.Expect(j.is_object() && j.size() == 5, "stats json must have exactly 5 keys");
  c.Expect(j.contains("mean") && j["mean"].is_number_float(), "mean: number");
  c.Expect(j.contains("std_dev") && j["std_dev"].is_number_float(), "std_dev: number");
  c.Expect(j.contains("min") && j["min"].is_number_unsigned(), "min: integer");
  c.Expect(j.contains("max") && j["max"].is_number_unsigned(), "max: integer");
  c.Expect(j.contains("count") && j["count"] == 22, "count: 22");
}

}  // namespace

int main() {
  Criterion("prompt_golden", 1, PromptGolden);
  Criterion("method_score_oracle", 5, MethodScoreOracle);
  Criterion("brisque_oracle", 30, BrisqueOracle);
  Criterion("svr_scoring", 1, SvrScoring);
  Criterion("par", 2, Par);
  Criterion("personalization", 2, Personalization);
  Criterion("end_to_end_offline", 60, EndToEnd);
  Criterion("catalog_stats", 0, CatalogStats);
  std::printf("%d criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
