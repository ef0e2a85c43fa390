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

#ifndef BANNERFORGE_CONFIG_H_
#define BANNERFORGE_CONFIG_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "bannerforge/attribute_extraction.h"
#include "bannerforge/image_gen.h"
#include "bannerforge/retry.h"

namespace bannerforge {

struct TextGenConfig {
  std::string base_url = "http://127.0.0.1:8001/generate";
  std::string auth_header;
  std::string auth_value;
  double temperature = 0.2;
  int max_tokens = 80;
};

struct ImageGenConfig {
  std::string base_url = "http://127.0.0.1:8002/txt2img";
  std::string auth_header;
  std::string auth_value;
  GenParams defaults;
  int max_inflight = 4;
};

struct DetectorConfig {
  std::string base_url = "http://127.0.0.1:8003/detect";
  double threshold = 0.25;
};

struct PathsConfig {
  std::string catalog;
  std::string template_file;  // empty: bundled attribute-extraction prompt
  std::string image_store = "out/images";
  std::string ledgers_dir = "out/ledgers";
  std::string svr_model;
  std::string svr_range;
};

struct Config {
  TextGenConfig textgen;
  ImageGenConfig imagegen;
  DetectorConfig detector;
  PathsConfig paths;
  SanitizeMode sanitize_mode = SanitizeMode::kLenient;
  std::string prompt_suffix;
  int retry_max_attempts = 3;
  int retry_initial_backoff_ms = 500;

  RetryPolicy Retry() const;
};

// Throws Error(kConfig).
void ValidateConfig(const Config& config);

nlohmann::json ToJson(const Config& config);
Config ConfigFromJson(const nlohmann::json& j);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup ProcessEnv();

// Defaults, then the json file (if given), then BANNERFORGE_<SECTION>_<KEY>
// environment variables, e.g. BANNERFORGE_IMAGEGEN_MAX_INFLIGHT or
// BANNERFORGE_IMAGEGEN_DEFAULTS_WIDTH; top-level keys use BANNERFORGE_<KEY>.
// Env values are coerced to the type of the key they replace.
Config LoadConfig(const std::optional<std::filesystem::path>& file,
                  const EnvLookup& env = ProcessEnv());

// The attribute-extraction prompt shipped with the library.
const std::string& BundledPromptTemplateText();
PromptTemplate LoadPromptTemplate(const Config& config);

}  // namespace bannerforge

#endif  // BANNERFORGE_CONFIG_H_
