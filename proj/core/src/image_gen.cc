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

#include "bannerforge/image_gen.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "bannerforge/error.h"
#include "bannerforge/png_codec.h"

namespace bannerforge {
namespace fs = std::filesystem;

void ValidateGenParams(const GenParams& p) {
  const auto check_dim = [](int v, const char* name) {
    if (v < 64 || v > 4096 || v % 8 != 0) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string(name) + " must be in [64, 4096] and a multiple of 8, got " +
                      std::to_string(v));
    }
  };
  check_dim(p.width, "width");
  check_dim(p.height, "height");
  if (p.steps < 1 || p.steps > 200) {
    throw Error(ErrorKind::kInvalidArgument,
                "steps must be in [1, 200], got " + std::to_string(p.steps));
  }
}

nlohmann::json ToJson(const GenParams& p) {
  return {{"width", p.width},
          {"height", p.height},
          {"steps", p.steps},
          {"guidance", p.guidance},
          {"seed", p.seed}};
}

GenParams GenParamsFromJson(const nlohmann::json& j, const GenParams& defaults) {
  GenParams p = defaults;
  p.width = j.value("width", p.width);
  p.height = j.value("height", p.height);
  p.steps = j.value("steps", p.steps);
  p.guidance = j.value("guidance", p.guidance);
  p.seed = j.value("seed", p.seed);
  return p;
}

ImageStore::ImageStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create image store " + root_.string());
}

fs::path ImageStore::PathFor(std::string_view hash) const {
  return root_ / std::string(hash.substr(0, 2)) / (std::string(hash) + ".png");
}

bool ImageStore::Contains(std::string_view hash) const {
  return IsHexDigest(hash) && fs::exists(PathFor(hash));
}

std::string ImageStore::Store(std::span<const std::uint8_t> bytes) const {
  DecodePng(bytes);
  const std::string hash = Sha256Hex(bytes);
  const fs::path target = PathFor(hash);
  if (fs::exists(target)) return hash;

  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + target.parent_path().string());

  static std::atomic<std::uint64_t> counter{0};
  std::ostringstream tmp_name;
  tmp_name << "." << hash << ".tmp." << std::this_thread::get_id() << "."
           << counter++;
  const fs::path tmp = target.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::kIo, "cannot publish " + target.string());
  }
  return hash;
}

Bytes ImageStore::Load(std::string_view hash) const {
  if (!Contains(hash)) {
    throw Error(ErrorKind::kMissingImage, "no stored image " + std::string(hash));
  }
  const auto text = ReadFileText(PathFor(hash));
  return Bytes(text.begin(), text.end());
}

std::vector<std::string> ImageStore::ListHashes() const {
  std::vector<std::string> hashes;
  for (const auto& entry : fs::recursive_directory_iterator(root_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    auto stem = entry.path().stem().string();
    if (IsHexDigest(stem)) hashes.push_back(std::move(stem));
  }
  std::sort(hashes.begin(), hashes.end());
  return hashes;
}

nlohmann::json ToJson(const GenerationRecord& r) {
  return {{"record_id", r.record_id},
          {"product_id", r.product_id},
          {"strategy", StrategyName(r.strategy)},
          {"prompt_text", r.prompt_text},
          {"params", ToJson(r.params)},
          {"image_hash", r.image_hash},
          {"created_at", r.created_at},
          {"backend_id", r.backend_id}};
}

GenerationRecord GenerationRecordFromJson(const nlohmann::json& j) {
  GenerationRecord r;
  r.record_id = j.at("record_id").get<std::string>();
  r.product_id = j.at("product_id").get<std::string>();
  r.strategy = ParseStrategy(j.at("strategy").get<std::string>());
  r.prompt_text = j.at("prompt_text").get<std::string>();
  r.params = GenParamsFromJson(j.at("params"));
  r.image_hash = j.at("image_hash").get<std::string>();
  r.created_at = j.at("created_at").get<std::string>();
  r.backend_id = j.at("backend_id").get<std::string>();
  return r;
}

std::string MakeRecordId(std::string_view product_id, Strategy strategy,
                         std::int64_t seed, std::string_view backend_id) {
  std::string key;
  key.append(product_id).push_back('\x1f');
  key.append(StrategyName(strategy)).push_back('\x1f');
  key.append(std::to_string(seed)).push_back('\x1f');
  key.append(backend_id);
  return Sha256Hex(key).substr(0, 16);
}

RunLedger::RunLedger(fs::path path) : writer_(path) {
  if (fs::exists(path)) {
    for (const auto& r : ReadRunLedger(path)) {
      keys_.emplace(r.product_id, r.strategy, r.params.seed, r.backend_id);
    }
  }
}

void RunLedger::Append(const GenerationRecord& record) {
  {
    std::lock_guard lock(mu_);
    Key key{record.product_id, record.strategy, record.params.seed,
            record.backend_id};
    if (!keys_.insert(key).second) {
      throw Error(ErrorKind::kDuplicateRecord,
                  "ledger already holds (" + record.product_id + ", " +
                      std::string(StrategyName(record.strategy)) + ", seed " +
                      std::to_string(record.params.seed) + ", " +
                      record.backend_id + ")");
    }
  }
  writer_.Append(ToJson(record));
}

std::vector<GenerationRecord> ReadRunLedger(const fs::path& path) {
  std::vector<GenerationRecord> records;
  for (const auto& [line, value] : ReadJsonl(path)) {
    try {
      records.push_back(GenerationRecordFromJson(value));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse, path.string() + " line " +
                                         std::to_string(line) + ": " + e.what());
    }
  }
  return records;
}

GenerationRecord GenerateImage(const ImagePrompt& prompt, const GenParams& params,
                               ImageGenClient& client, const ImageStore& store,
                               const GenerateOptions& options, RunLedger* ledger) {
  ValidateGenParams(params);
  if (prompt.text.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "empty image prompt");
  }
  const Bytes bytes = CallWithRetry(options.retry, options.sleep, [&] {
    return client.Generate(prompt.text, params);
  });

  GenerationRecord record;
  record.record_id = MakeRecordId(prompt.product_id, prompt.strategy, params.seed,
                                  options.backend_id);
  record.product_id = prompt.product_id;
  record.strategy = prompt.strategy;
  record.prompt_text = prompt.text;
  record.params = params;
  record.image_hash = store.Store(bytes);
  record.created_at = FormatUtc(options.clock());
  record.backend_id = options.backend_id;
  if (ledger) ledger->Append(record);
  return record;
}

}  // namespace bannerforge
