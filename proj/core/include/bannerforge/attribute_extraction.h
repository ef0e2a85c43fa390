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

#ifndef BANNERFORGE_ATTRIBUTE_EXTRACTION_H_
#define BANNERFORGE_ATTRIBUTE_EXTRACTION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bannerforge/catalog.h"
#include "bannerforge/jsonl.h"
#include "bannerforge/retry.h"

namespace bannerforge {

inline constexpr std::string_view kProductNamePlaceholder = "{{PRODUCT_NAME}}";

enum class ChatWrapper { kNone, kInstSys };

// A prompt for the text-generation service. With kInstSys the rendered text is
//
//   <<SYS>> \n<system_text><</SYS>> \n\n\n[INST] \n<user_text>[/INST] \n
//
// which is the layout of the bundled attribute-extraction prompt.
class PromptTemplate {
 public:
  // Throws Error(kInvalidTemplate) unless user_text holds the placeholder
  // exactly once and system_text holds none.
  PromptTemplate(std::string system_text, std::string user_text,
                 ChatWrapper wrapper);

  // Parses template file text. Text starting with "<<SYS>>" must follow the
  // kInstSys layout exactly; anything else becomes a kNone user template.
  static PromptTemplate Parse(std::string_view text);
  static PromptTemplate Load(const std::filesystem::path& path);

  const std::string& system_text() const { return system_text_; }
  const std::string& user_text() const { return user_text_; }
  ChatWrapper wrapper() const { return wrapper_; }

  // Single-pass substitution: placeholder syntax inside the name is copied
  // through untouched.
  std::string Render(std::string_view product_name) const;

 private:
  std::string system_text_;
  std::string user_text_;
  ChatWrapper wrapper_;
};

std::string RenderLlmPrompt(const Product& product, const PromptTemplate& tmpl);

enum class SanitizeMode { kStrict, kLenient };
SanitizeMode ParseSanitizeMode(std::string_view text);
std::string_view SanitizeModeName(SanitizeMode mode);

enum class Violation { kEmoji, kDigits, kDisallowedCharacter };
std::string_view ViolationName(Violation v);

struct SanitizeResult {
  std::string text;
  std::vector<Violation> violations;  // one entry per rule, first-hit order
};

// Keeps ASCII letters, space, comma, period, hyphen, apostrophe and double
// quote (plus digits in lenient mode, still reported), maps other ASCII
// whitespace to spaces, collapses runs of spaces, trims, and cuts after the
// first period. Throws Error(kEmptyOutput) when nothing alphanumeric is left.
SanitizeResult SanitizeOutput(std::string_view raw, SanitizeMode mode);

struct AttributeTuple {
  std::string subject;
  std::string keywords;
  std::string setting;

  friend bool operator==(const AttributeTuple&, const AttributeTuple&) = default;
};

// "<subject> with <keywords> in <setting>": setting after the last " in ",
// subject/keywords split on the first " with " before it.
std::optional<AttributeTuple> ParseTuple(std::string_view sentence);

struct TextGenRequest {
  std::string prompt;
  int max_tokens = 80;
  double temperature = 0.2;
  std::optional<std::int64_t> seed;
};

class TextGenClient {
 public:
  virtual ~TextGenClient() = default;
  // Throws Error(kTransport) for retryable failures.
  virtual std::string Generate(const TextGenRequest& request) = 0;
};

struct ExtractionResult {
  std::string product_id;
  std::string raw_output;
  std::string sanitized_output;
  std::optional<AttributeTuple> parsed;
  std::vector<Violation> violations;
};

nlohmann::json ToJson(const ExtractionResult& result);
ExtractionResult ExtractionFromJson(const nlohmann::json& j);

struct ExtractionOptions {
  SanitizeMode mode = SanitizeMode::kLenient;
  int max_tokens = 80;
  double temperature = 0.2;
  std::optional<std::int64_t> seed;
  RetryPolicy retry;
  Sleeper sleep = ThreadSleeper();
};

// Successful and failed extractions are both appended to `ledger` when given;
// failures carry an "error" field. Throws Error(kTransport) after retries and
// Error(kEmptyOutput) for replies that sanitize to nothing.
ExtractionResult ExtractAttributes(const Product& product,
                                   const PromptTemplate& tmpl,
                                   TextGenClient& client,
                                   const ExtractionOptions& options,
                                   JsonlWriter* ledger = nullptr);

}  // namespace bannerforge

#endif  // BANNERFORGE_ATTRIBUTE_EXTRACTION_H_
