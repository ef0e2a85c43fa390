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

#ifndef BANNERFORGE_IMAGE_GEN_H_
#define BANNERFORGE_IMAGE_GEN_H_

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "bannerforge/digest.h"
#include "bannerforge/jsonl.h"
#include "bannerforge/prompt_builder.h"
#include "bannerforge/retry.h"
#include "bannerforge/util.h"

namespace bannerforge {

struct GenParams {
  int width = 1024;
  int height = 768;
  int steps = 30;
  double guidance = 7.5;
  std::int64_t seed = 0;

  friend bool operator==(const GenParams&, const GenParams&) = default;
};

// width/height in [64, 4096] and multiples of 8, steps in [1, 200].
void ValidateGenParams(const GenParams& params);
nlohmann::json ToJson(const GenParams& params);
GenParams GenParamsFromJson(const nlohmann::json& j, const GenParams& defaults = {});

class ImageGenClient {
 public:
  virtual ~ImageGenClient() = default;
  // Returns the encoded image bytes. Throws Error(kTransport) for retryable
  // failures, Error(kBackendRejected) when the backend refuses the request.
  virtual Bytes Generate(std::string_view prompt, const GenParams& params) = 0;
};

// Content-addressed PNG store laid out as <root>/<first 2 hex>/<sha256>.png.
// Writers go through a temp file and rename, so concurrent stores of the same
// bytes are safe.
class ImageStore {
 public:
  explicit ImageStore(std::filesystem::path root);

  // Throws Error(kDecodeFailure) unless `bytes` decode as PNG.
  std::string Store(std::span<const std::uint8_t> bytes) const;

  bool Contains(std::string_view hash) const;
  std::filesystem::path PathFor(std::string_view hash) const;
  Bytes Load(std::string_view hash) const;
  std::vector<std::string> ListHashes() const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

struct GenerationRecord {
  std::string record_id;
  std::string product_id;
  Strategy strategy = Strategy::kPname;
  std::string prompt_text;
  GenParams params;
  std::string image_hash;
  std::string created_at;
  std::string backend_id;
};

nlohmann::json ToJson(const GenerationRecord& record);
GenerationRecord GenerationRecordFromJson(const nlohmann::json& j);

// Stable id derived from (product, strategy, seed, backend).
std::string MakeRecordId(std::string_view product_id, Strategy strategy,
                         std::int64_t seed, std::string_view backend_id);

// Append-only jsonl of GenerationRecords. Rejects a second record with the
// same (product_id, strategy, seed, backend_id).
class RunLedger {
 public:
  explicit RunLedger(std::filesystem::path path);

  void Append(const GenerationRecord& record);
  const std::filesystem::path& path() const { return writer_.path(); }

 private:
  using Key = std::tuple<std::string, Strategy, std::int64_t, std::string>;
  JsonlWriter writer_;
  std::mutex mu_;
  std::set<Key> keys_;
};

std::vector<GenerationRecord> ReadRunLedger(const std::filesystem::path& path);

struct GenerateOptions {
  std::string backend_id = "mock";
  RetryPolicy retry;
  Sleeper sleep = ThreadSleeper();
  Clock clock = SystemClock();
};

GenerationRecord GenerateImage(const ImagePrompt& prompt, const GenParams& params,
                               ImageGenClient& client, const ImageStore& store,
                               const GenerateOptions& options,
                               RunLedger* ledger = nullptr);

}  // namespace bannerforge

#endif  // BANNERFORGE_IMAGE_GEN_H_
