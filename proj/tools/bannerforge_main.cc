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

// bannerforge: command-line front end for catalog ingestion, banner
// generation, quality scoring and the human survey service.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <map>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <pthread.h>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bannerforge/adherence.h"
#include "bannerforge/attribute_extraction.h"
#include "bannerforge/brisque.h"
#include "bannerforge/catalog.h"
#include "bannerforge/config.h"
#include "bannerforge/error.h"
#include "bannerforge/http_clients.h"
#include "bannerforge/human_eval.h"
#include "bannerforge/image_gen.h"
#include "bannerforge/jsonl.h"
#include "bannerforge/mock_backends.h"
#include "bannerforge/personalization.h"
#include "bannerforge/pipeline.h"
#include "bannerforge/prompt_builder.h"
#include "bannerforge/survey_server.h"
#include "bannerforge/svr_model.h"

namespace bf = bannerforge;
namespace fs = std::filesystem;

namespace {

struct GlobalFlags {
  std::string config_file;
  std::string backend = "mock";
  std::uint64_t seed = 0;
  std::string catalog;
  std::string image_store;
  std::string ledgers_dir;
  std::string sanitize_mode;
  int max_inflight = 0;
  std::vector<std::string> mock_fail_text;
  std::string mock_image_mode = "normal";
};

struct Env {
  GlobalFlags flags;
  bf::Config config;

  fs::path Ledger(const std::string& name) const {
    fs::create_directories(config.paths.ledgers_dir);
    return fs::path(config.paths.ledgers_dir) / name;
  }

  bf::Catalog LoadCatalog() const {
    if (!config.paths.catalog.empty()) {
      return bf::IngestCatalog(config.paths.catalog, bf::FormatFromPath(config.paths.catalog));
    }
    const auto ingested = fs::path(config.paths.ledgers_dir) / "catalog.jsonl";
    if (fs::exists(ingested)) return bf::IngestCatalog(ingested, bf::CatalogFormat::kJsonl);
    throw bf::Error(bf::ErrorKind::kConfig,
                    "no catalog: pass --catalog, set paths.catalog, or run ingest first");
  }

  bool mock() const { return flags.backend == "mock"; }

  std::unique_ptr<bf::TextGenClient> TextGen() const {
    if (mock()) {
      auto client = std::make_unique<bf::MockTextGenClient>();
      for (const auto& name : flags.mock_fail_text) client->FailOn(name);
      return client;
    }
    return std::make_unique<bf::HttpTextGenClient>(bf::HttpEndpoint{
        config.textgen.base_url, config.textgen.auth_header, config.textgen.auth_value});
  }

  std::unique_ptr<bf::ImageGenClient> ImageGen() const {
    if (mock()) {
      using Mode = bf::MockImageGenClient::Mode;
      const std::map<std::string, Mode> modes = {{"normal", Mode::kNormal},
                                                 {"unreachable", Mode::kUnreachable},
                                                 {"reject", Mode::kReject},
                                                 {"nonimage", Mode::kNonImage}};
      return std::make_unique<bf::MockImageGenClient>(8, modes.at(flags.mock_image_mode));
    }
    return std::make_unique<bf::HttpImageGenClient>(bf::HttpEndpoint{
        config.imagegen.base_url, config.imagegen.auth_header, config.imagegen.auth_value});
  }

  std::unique_ptr<bf::DetectorClient> Detector() const {
    if (mock()) return std::make_unique<bf::MockDetectorClient>();
    return std::make_unique<bf::HttpDetectorClient>(bf::HttpEndpoint{config.detector.base_url, "", ""});
  }

  bf::ExtractionOptions Extraction() const {
    bf::ExtractionOptions o;
    o.mode = config.sanitize_mode;
    o.max_tokens = config.textgen.max_tokens;
    o.temperature = config.textgen.temperature;
    o.seed = static_cast<std::int64_t>(flags.seed);
    o.retry = config.Retry();
    return o;
  }

  bf::GenerateOptions Generation() const {
    bf::GenerateOptions o;
    o.backend_id = flags.backend;
    o.retry = config.Retry();
    return o;
  }
};

void Emit(const nlohmann::json& j) { std::cout << j.dump(2) << std::endl; }

std::vector<bf::Strategy> ParseStrategies(const std::vector<std::string>& names) {
  std::vector<bf::Strategy> out;
  for (const auto& n : names) out.push_back(bf::ParseStrategy(n));
  if (out.empty()) out.assign(bf::kAllStrategies.begin(), bf::kAllStrategies.end());
  return out;
}

// Latest extraction per product from an extraction ledger.
std::map<std::string, bf::ExtractionResult> LoadExtractions(const fs::path& path) {
  std::map<std::string, bf::ExtractionResult> out;
  if (!fs::exists(path)) return out;
  for (const auto& line : bf::ReadJsonl(path)) {
    if (line.value.contains("error")) continue;
    auto r = bf::ExtractionFromJson(line.value);
    out[r.product_id] = std::move(r);
  }
  return out;
}

int CmdIngest(Env& env, const std::string& format) {
  const auto& path = env.config.paths.catalog;
  if (path.empty()) throw bf::Error(bf::ErrorKind::kConfig, "ingest needs --catalog");
  const auto fmt = format.empty() ? bf::FormatFromPath(path) : bf::ParseCatalogFormat(format);
  const auto catalog = bf::IngestCatalog(path, fmt);
  const auto out = env.Ledger("catalog.jsonl");
  bf::WriteFileText(out, bf::SerializeCatalog(catalog, bf::CatalogFormat::kJsonl));
  std::map<std::string, std::size_t> types;
  for (const auto& p : catalog.products()) ++types[p.product_type];
  Emit({{"products", catalog.size()}, {"product_types", types}, {"stored", out.string()}});
  return 0;
}

int CmdStats(Env& env) {
  Emit(bf::ToJson(bf::ComputeWordCountStats(env.LoadCatalog())));
  return 0;
}

int CmdSample(Env& env, const std::string& type, std::size_t n) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& p : bf::SampleItems(env.LoadCatalog(), type, n, env.flags.seed)) {
    items.push_back(bf::ToJson(p));
  }
  Emit({{"product_type", type}, {"n", n}, {"seed", env.flags.seed}, {"items", items}});
  return 0;
}

int CmdExtract(Env& env, const std::string& type, std::size_t n) {
  const auto catalog = env.LoadCatalog();
  const auto tmpl = bf::LoadPromptTemplate(env.config);
  auto client = env.TextGen();
  bf::JsonlWriter ledger(env.Ledger("extractions.jsonl"));
  nlohmann::json results = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& p : bf::SampleItems(catalog, type, n, env.flags.seed)) {
    try {
      results.push_back(bf::ToJson(bf::ExtractAttributes(p, tmpl, *client, env.Extraction(), &ledger)));
    } catch (const bf::Error& e) {
      failures.push_back({{"product_id", p.product_id},
                          {"error", bf::ErrorKindName(e.kind())},
                          {"message", e.what()}});
    }
  }
  Emit({{"extractions", results}, {"failures", failures}, {"ledger", ledger.path().string()}});
  return results.empty() ? 1 : 0;
}

int CmdGenerate(Env& env, const std::vector<std::string>& product_ids,
                const std::vector<std::string>& strategy_names) {
  const auto catalog = env.LoadCatalog();
  const auto extractions = LoadExtractions(env.Ledger("extractions.jsonl"));
  auto client = env.ImageGen();
  bf::ImageStore store(env.config.paths.image_store);
  bf::RunLedger ledger(env.Ledger("run.jsonl"));
  nlohmann::json records = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  std::size_t attempted = 0;
  for (const auto& id : product_ids) {
    const auto* product = catalog.Find(id);
    if (!product) throw bf::Error(bf::ErrorKind::kInvalidArgument, "unknown product " + id);
    auto params = env.config.imagegen.defaults;
    params.seed = bf::GenerationSeed(env.flags.seed, id);
    for (bf::Strategy s : ParseStrategies(strategy_names)) {
      ++attempted;
      try {
        auto it = extractions.find(id);
        const auto prompt = bf::BuildPrompt(*product, s, it == extractions.end() ? nullptr : &it->second,
                                            env.config.prompt_suffix);
        records.push_back(bf::ToJson(bf::GenerateImage(prompt, params, *client, store,
                                                       env.Generation(), &ledger)));
      } catch (const bf::Error& e) {
        failures.push_back({{"product_id", id},
                            {"strategy", bf::StrategyName(s)},
                            {"error", bf::ErrorKindName(e.kind())},
                            {"message", e.what()}});
      }
    }
  }
  Emit({{"records", records}, {"failures", failures}});
  return attempted > 0 && records.empty() ? 1 : 0;
}

int CmdRun(Env& env, const std::string& type, std::size_t n,
           const std::vector<std::string>& strategy_names) {
  const auto catalog = env.LoadCatalog();
  const auto tmpl = bf::LoadPromptTemplate(env.config);
  auto textgen = env.TextGen();
  auto imagegen = env.ImageGen();
  bf::ImageStore store(env.config.paths.image_store);
  bf::RunLedger ledger(env.Ledger("run.jsonl"));
  bf::JsonlWriter extraction_ledger(env.Ledger("extractions.jsonl"));

  bf::RunOptions options;
  options.product_type = type;
  options.n = n;
  options.seed = env.flags.seed;
  options.strategies = ParseStrategies(strategy_names);
  options.gen_defaults = env.config.imagegen.defaults;
  options.max_inflight = static_cast<std::size_t>(env.config.imagegen.max_inflight);
  options.prompt_suffix = env.config.prompt_suffix;
  options.extraction = env.Extraction();
  options.generation = env.Generation();
  const auto summary = bf::RunPipeline(
      {catalog, tmpl, *textgen, *imagegen, store, ledger, &extraction_ledger}, options);
  auto out = bf::ToJson(summary);
  out["ledger"] = ledger.path().string();
  out["image_store"] = store.root().string();
  Emit(out);
  if (summary.total_failure()) {
    std::cerr << "error: all " << summary.attempted_generations << " generations failed\n";
    return 1;
  }
  return 0;
}

int CmdPersonalize(Env& env, const std::string& affinities, const std::string& type) {
  const auto catalog = env.LoadCatalog();
  const auto candidates = type.empty() ? catalog.products() : catalog.OfType(type);
  nlohmann::json selections = nlohmann::json::array();
  for (const auto& user : bf::LoadAffinities(affinities)) {
    selections.push_back(bf::ToJson(bf::SelectItem(user, candidates)));
  }
  Emit({{"selections", selections}});
  return 0;
}

int CmdEvaluateBrisque(Env& env, const std::string& images, std::string model, std::string range) {
  if (model.empty()) model = env.config.paths.svr_model;
  if (range.empty()) range = env.config.paths.svr_range;
  if (model.empty() || range.empty()) {
    throw bf::Error(bf::ErrorKind::kConfig, "evaluate brisque needs --model and --range");
  }
  const auto svr = bf::brisque::LoadSvrModel(model, range);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(images)) {
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  nlohmann::json per_image = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  std::vector<double> scores;
  for (const auto& f : files) {
    try {
      const double s = bf::brisque::Score(bf::brisque::ComputeFeatures(bf::brisque::LoadGray(f)), svr);
      scores.push_back(s);
      per_image.push_back({{"image", f.string()}, {"score", s}});
    } catch (const bf::Error& e) {
      failures.push_back({{"image", f.string()},
                          {"error", bf::ErrorKindName(e.kind())},
                          {"message", e.what()}});
    }
  }
  const auto summary = bf::brisque::SummarizeScores(scores);
  Emit({{"per_image", per_image},
        {"mean", summary.mean},
        {"std_dev", summary.std_dev},
        {"failures", failures}});
  return 0;
}

int CmdEvaluatePar(Env& env, std::string run_ledger, double threshold) {
  if (run_ledger.empty()) run_ledger = env.Ledger("run.jsonl").string();
  if (threshold < 0) threshold = env.config.detector.threshold;
  const auto records = bf::ReadRunLedger(run_ledger);
  const auto extractions = LoadExtractions(env.Ledger("extractions.jsonl"));
  bf::ImageStore store(env.config.paths.image_store);
  auto detector = env.Detector();
  std::map<bf::Strategy, std::vector<bf::ParItem>> by_strategy;
  std::vector<bf::ParItem> all;
  for (const auto& r : records) {
    const bf::ImagePrompt prompt{r.product_id, r.strategy, r.prompt_text, bf::SourceFor(r.strategy)};
    auto it = extractions.find(r.product_id);
    const bf::ExtractionResult* ex =
        r.strategy == bf::Strategy::kLlm && it != extractions.end() ? &it->second : nullptr;
    bf::ParItem item{bf::ExtractObjects(prompt, ex, r.record_id),
                     detector->Detect(store.Load(r.image_hash))};
    by_strategy[r.strategy].push_back(item);
    all.push_back(std::move(item));
  }
  nlohmann::json methods = nlohmann::json::object();
  for (const auto& [s, batch] : by_strategy) {
    methods[std::string(bf::StrategyName(s))] = {{"par", bf::ParScore(batch, threshold)},
                                                 {"prompts", batch.size()}};
  }
  Emit({{"par", bf::ParScore(all, threshold)},
        {"per_prompt_mean", bf::PerPromptMeanPar(all, threshold)},
        {"threshold", threshold},
        {"methods", methods}});
  return 0;
}

int CmdSurveyServe(Env& env, const std::string& host, int port, std::string run_ledger,
                   std::string ratings, const std::string& static_dir) {
  if (run_ledger.empty()) run_ledger = env.Ledger("run.jsonl").string();
  if (ratings.empty()) ratings = env.Ledger("ratings.jsonl").string();
  const auto catalog = env.LoadCatalog();
  const auto records = bf::ReadRunLedger(run_ledger);
  std::vector<bf::Product> products;
  for (const auto& r : records) {
    if (std::none_of(products.begin(), products.end(),
                     [&](const auto& p) { return p.product_id == r.product_id; })) {
      const auto* p = catalog.Find(r.product_id);
      if (!p) throw bf::Error(bf::ErrorKind::kMissingField, "ledger product " + r.product_id + " not in catalog");
      products.push_back(*p);
    }
  }
  auto manifest = std::make_shared<bf::SurveyManifest>(bf::CreateSurvey(products, records, env.flags.seed));
  bf::WriteFileText(env.Ledger("survey_manifest.json"), bf::ToJson(*manifest).dump(2) + "\n");
  bf::ImageStore images(env.config.paths.image_store);
  bf::RatingStore store(manifest, fs::path(ratings));
  bf::SurveyServer server(manifest, store, images,
                          static_dir.empty() ? std::nullopt : std::optional<fs::path>(static_dir));
  int bound = port;
  if (port == 0) {
    bound = server.BindAnyPort(host);
    if (bound < 0) throw bf::Error(bf::ErrorKind::kIo, "cannot bind " + host);
  } else if (!server.Bind(host, port)) {
    throw bf::Error(bf::ErrorKind::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::atomic<bool> signalled{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    signalled = true;
    server.Stop();
  });

  Emit({{"url", "http://" + host + ":" + std::to_string(bound)},
        {"port", bound},
        {"tasks", manifest->tasks.size()},
        {"ratings", ratings}});
  server.Serve();
  if (!signalled) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

int CmdSurveyReport(Env& env, std::string ratings, const std::string& manifest_path) {
  if (ratings.empty()) ratings = env.Ledger("ratings.jsonl").string();
  std::optional<bf::SurveyManifest> manifest;
  if (!manifest_path.empty()) {
    manifest = bf::SurveyManifestFromJson(nlohmann::json::parse(bf::ReadFileText(manifest_path)));
  }
  const auto records = bf::ReadRatingsLedger(ratings);
  const auto report = bf::SurveyReport(records, manifest ? &*manifest : nullptr);
  std::cerr << bf::FormatMethodTable(report);
  Emit(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bannerforge: personalized banner generation and evaluation"};
  app.require_subcommand(1);
  Env env;
  auto& f = env.flags;
  app.add_option("--config", f.config_file, "json config file")->check(CLI::ExistingFile);
  app.add_option("--backend", f.backend, "service backend")
      ->check(CLI::IsMember({"mock", "http"}));
  app.add_option("--seed", f.seed, "seed for sampling and generation");
  app.add_option("--catalog", f.catalog, "catalog file (csv or jsonl)");
  app.add_option("--image-store", f.image_store, "image store directory");
  app.add_option("--ledgers-dir", f.ledgers_dir, "directory for jsonl ledgers");
  app.add_option("--sanitize-mode", f.sanitize_mode, "strict or lenient")
      ->check(CLI::IsMember({"strict", "lenient"}));
  app.add_option("--max-inflight", f.max_inflight, "concurrent backend calls");
  app.add_option("--mock-fail-text", f.mock_fail_text,
                 "mock text generation fails for this product name (repeatable)");
  app.add_option("--mock-image-mode", f.mock_image_mode, "mock image backend behaviour")
      ->check(CLI::IsMember({"normal", "unreachable", "reject", "nonimage"}));

  std::string format, type, affinities, images, model, range, ledger, ratings, manifest,
      static_dir, host = "127.0.0.1";
  std::size_t n = 1;
  int port = 8080;
  double threshold = -1;
  std::vector<std::string> strategies, product_ids;

  auto* ingest = app.add_subcommand("ingest", "validate a catalog and store it");
  ingest->add_option("--format", format, "csv or jsonl (default: from extension)");
  auto* stats = app.add_subcommand("stats", "word-count statistics of product names");
  auto* sample = app.add_subcommand("sample", "seeded sample of one product type");
  auto* extract = app.add_subcommand("extract", "LLM attribute extraction for a sample");
  auto* run = app.add_subcommand("run", "sample, extract, build prompts and generate");
  for (auto* cmd : {sample, extract, run}) {
    cmd->add_option("--type", type, "product type")->required();
    cmd->add_option("--n", n, "number of products")->check(CLI::PositiveNumber);
  }
  run->add_option("--strategies", strategies, "LLM, PNAME, PTYPE (default: all)")->delimiter(',');
  auto* generate = app.add_subcommand("generate", "generate images for catalog products");
  generate->add_option("--product-id", product_ids, "product ids")->required()->delimiter(',');
  generate->add_option("--strategies", strategies, "LLM, PNAME, PTYPE (default: all)")->delimiter(',');
  auto* personalize = app.add_subcommand("personalize", "pick one item per user");
  personalize->add_option("--affinities", affinities, "users jsonl")->required()->check(CLI::ExistingFile);
  personalize->add_option("--type", type, "restrict candidates to a product type");

  auto* evaluate = app.add_subcommand("evaluate", "image quality and prompt adherence");
  evaluate->require_subcommand(1);
  auto* brisque = evaluate->add_subcommand("brisque", "BRISQUE scores for a directory of PNGs");
  brisque->add_option("--images", images, "image directory")->required()->check(CLI::ExistingDirectory);
  brisque->add_option("--model", model, "SVR model file");
  brisque->add_option("--range", range, "feature range file");
  auto* par = evaluate->add_subcommand("par", "prompt adherence recall over a run ledger");
  par->add_option("--ledger", ledger, "run ledger (default: <ledgers>/run.jsonl)");
  par->add_option("--threshold", threshold, "presence threshold")->check(CLI::Range(0.0, 1.0));

  auto* survey = app.add_subcommand("survey", "human evaluation service");
  survey->require_subcommand(1);
  auto* serve = survey->add_subcommand("serve", "serve the blinded rating survey");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port (0 picks a free one)");
  serve->add_option("--ledger", ledger, "run ledger with the images to rate");
  serve->add_option("--ratings", ratings, "ratings ledger");
  serve->add_option("--static", static_dir, "directory with the survey web UI");
  auto* report = survey->add_subcommand("report", "aggregate the ratings ledger");
  report->add_option("--ratings", ratings, "ratings ledger");
  report->add_option("--manifest", manifest, "survey manifest json");

  CLI11_PARSE(app, argc, argv);

  try {
    env.config = bf::LoadConfig(f.config_file.empty() ? std::nullopt
                                                      : std::optional<fs::path>(f.config_file));
    if (!f.catalog.empty()) env.config.paths.catalog = f.catalog;
    if (!f.image_store.empty()) env.config.paths.image_store = f.image_store;
    if (!f.ledgers_dir.empty()) env.config.paths.ledgers_dir = f.ledgers_dir;
    if (!f.sanitize_mode.empty()) env.config.sanitize_mode = bf::ParseSanitizeMode(f.sanitize_mode);
    if (f.max_inflight) env.config.imagegen.max_inflight = f.max_inflight;
    bf::ValidateConfig(env.config);

    if (*ingest) return CmdIngest(env, format);
    if (*stats) return CmdStats(env);
    if (*sample) return CmdSample(env, type, n);
    if (*extract) return CmdExtract(env, type, n);
    if (*generate) return CmdGenerate(env, product_ids, strategies);
    if (*run) return CmdRun(env, type, n, strategies);
    if (*personalize) return CmdPersonalize(env, affinities, type);
    if (*brisque) return CmdEvaluateBrisque(env, images, model, range);
    if (*par) return CmdEvaluatePar(env, ledger, threshold);
    if (*serve) return CmdSurveyServe(env, host, port, ledger, ratings, static_dir);
    if (*report) return CmdSurveyReport(env, ratings, manifest);
  } catch (const bf::Error& e) {
    std::cerr << "error: " << bf::ErrorKindName(e.kind()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
