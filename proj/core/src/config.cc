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

#include "bannerforge/config.h"

#include <cctype>
#include <cstdlib>

#include "bannerforge/error.h"
#include "bannerforge/jsonl.h"

namespace bannerforge {
namespace {

void ApplyEnv(nlohmann::json& node, const std::string& prefix, const EnvLookup& env) {
  for (auto& [key, value] : node.items()) {
    std::string name = prefix + "_";
    for (char c : key) name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (value.is_object()) {
      ApplyEnv(value, name, env);
      continue;
    }
    const auto override_value = env(name);
    if (!override_value) continue;
    try {
      if (value.is_boolean()) {
        value = (*override_value == "1" || *override_value == "true");
      } else if (value.is_number_integer()) {
        value = std::stoll(*override_value);
      } else if (value.is_number()) {
        value = std::stod(*override_value);
      } else {
        value = *override_value;
      }
    } catch (const std::exception&) {
      throw Error(ErrorKind::kConfig,
                  "environment variable " + name + " has an invalid value '" +
                      *override_value + "'");
    }
  }
}

}  // namespace

RetryPolicy Config::Retry() const {
  RetryPolicy policy;
  policy.max_attempts = retry_max_attempts;
  policy.initial_backoff = std::chrono::milliseconds(retry_initial_backoff_ms);
  return policy;
}

void ValidateConfig(const Config& c) {
  if (c.imagegen.max_inflight < 1) {
    throw Error(ErrorKind::kConfig, "imagegen.max_inflight must be >= 1");
  }
  if (c.retry_max_attempts < 1) {
    throw Error(ErrorKind::kConfig, "retry.max_attempts must be >= 1");
  }
  if (c.retry_initial_backoff_ms < 0) {
    throw Error(ErrorKind::kConfig, "retry.initial_backoff_ms must be >= 0");
  }
  if (!(c.detector.threshold >= 0.0 && c.detector.threshold <= 1.0)) {
    throw Error(ErrorKind::kConfig, "detector.threshold must be in [0, 1]");
  }
  if (c.textgen.max_tokens < 1) {
    throw Error(ErrorKind::kConfig, "textgen.max_tokens must be >= 1");
  }
  try {
    ValidateGenParams(c.imagegen.defaults);
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, std::string("imagegen.defaults: ") + e.what());
  }
}

nlohmann::json ToJson(const Config& c) {
  return {
      {"textgen",
       {{"base_url", c.textgen.base_url},
        {"auth_header", c.textgen.auth_header},
        {"auth_value", c.textgen.auth_value},
        {"temperature", c.textgen.temperature},
        {"max_tokens", c.textgen.max_tokens}}},
      {"imagegen",
       {{"base_url", c.imagegen.base_url},
        {"auth_header", c.imagegen.auth_header},
        {"auth_value", c.imagegen.auth_value},
        {"defaults", ToJson(c.imagegen.defaults)},
        {"max_inflight", c.imagegen.max_inflight}}},
      {"detector", {{"base_url", c.detector.base_url}, {"threshold", c.detector.threshold}}},
      {"paths",
       {{"catalog", c.paths.catalog},
        {"template", c.paths.template_file},
        {"image_store", c.paths.image_store},
        {"ledgers_dir", c.paths.ledgers_dir},
        {"svr_model", c.paths.svr_model},
        {"svr_range", c.paths.svr_range}}},
      {"retry",
       {{"max_attempts", c.retry_max_attempts},
        {"initial_backoff_ms", c.retry_initial_backoff_ms}}},
      {"sanitize_mode", SanitizeModeName(c.sanitize_mode)},
      {"prompt_suffix", c.prompt_suffix},
  };
}

Config ConfigFromJson(const nlohmann::json& j) {
  Config c;
  try {
    const auto& t = j.at("textgen");
    c.textgen = {t.at("base_url"), t.at("auth_header"), t.at("auth_value"),
                 t.at("temperature"), t.at("max_tokens")};
    const auto& i = j.at("imagegen");
    c.imagegen.base_url = i.at("base_url");
    c.imagegen.auth_header = i.at("auth_header");
    c.imagegen.auth_value = i.at("auth_value");
    c.imagegen.defaults = GenParamsFromJson(i.at("defaults"));
    c.imagegen.max_inflight = i.at("max_inflight");
    const auto& d = j.at("detector");
    c.detector = {d.at("base_url"), d.at("threshold")};
    const auto& p = j.at("paths");
    c.paths = {p.at("catalog"),     p.at("template"),  p.at("image_store"),
               p.at("ledgers_dir"), p.at("svr_model"), p.at("svr_range")};
    c.retry_max_attempts = j.at("retry").at("max_attempts");
    c.retry_initial_backoff_ms = j.at("retry").at("initial_backoff_ms");
    c.sanitize_mode = ParseSanitizeMode(j.at("sanitize_mode").get<std::string>());
    c.prompt_suffix = j.at("prompt_suffix");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("invalid config: ") + e.what());
  }
  return c;
}

EnvLookup ProcessEnv() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

Config LoadConfig(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  nlohmann::json merged = ToJson(Config{});
  if (file) {
    nlohmann::json overrides;
    try {
      overrides = nlohmann::json::parse(ReadFileText(*file));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kConfig, file->string() + ": " + e.what());
    }
    if (!overrides.is_object()) {
      throw Error(ErrorKind::kConfig, file->string() + ": expected a json object");
    }
    merged.merge_patch(overrides);
  }
  if (env) ApplyEnv(merged, "BANNERFORGE", env);
  Config config = ConfigFromJson(merged);
  ValidateConfig(config);
  return config;
}

PromptTemplate LoadPromptTemplate(const Config& config) {
  if (config.paths.template_file.empty()) {
    return PromptTemplate::Parse(BundledPromptTemplateText());
  }
  return PromptTemplate::Load(config.paths.template_file);
}

}  // namespace bannerforge
