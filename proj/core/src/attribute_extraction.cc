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

#include "bannerforge/attribute_extraction.h"

#include <algorithm>

#include "bannerforge/error.h"
#include "bannerforge/util.h"

namespace bannerforge {
namespace {

constexpr std::string_view kSysOpen = "<<SYS>> \n";
constexpr std::string_view kSysClose = "<</SYS>> \n";
constexpr std::string_view kBetweenBlocks = "\n\n";
constexpr std::string_view kInstOpen = "[INST] \n";
constexpr std::string_view kInstClose = "[/INST] \n";

std::size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

bool IsEmoji(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
         (cp >= 0x2300 && cp <= 0x23FF) || (cp >= 0x2B00 && cp <= 0x2BFF) ||
         (cp >= 0xFE00 && cp <= 0xFE0F) || (cp >= 0xE0020 && cp <= 0xE007F) ||
         cp == 0x200D || cp == 0x20E3 || cp == 0x3030 || cp == 0x303D ||
         cp == 0x3297 || cp == 0x3299 || cp == 0x00A9 || cp == 0x00AE ||
         cp == 0x2122 || cp == 0x2139 || (cp >= 0x2194 && cp <= 0x21AA);
}

bool IsKeptPunctuation(char32_t cp) {
  return cp == ' ' || cp == ',' || cp == '.' || cp == '-' || cp == '\'' ||
         cp == '"';
}

bool IsAsciiLetter(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

bool IsDigit(char32_t cp) { return cp >= '0' && cp <= '9'; }

std::string NormalizeSpaces(std::string_view text) {
  std::string out;
  for (auto word : SplitWhitespace(text)) {
    if (!out.empty()) out.push_back(' ');
    out.append(word);
  }
  return out;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string system_text, std::string user_text,
                               ChatWrapper wrapper)
    : system_text_(std::move(system_text)),
      user_text_(std::move(user_text)),
      wrapper_(wrapper) {
  const auto n = CountOccurrences(user_text_, kProductNamePlaceholder);
  if (n != 1) {
    throw Error(ErrorKind::kInvalidTemplate,
                "user text must contain {{PRODUCT_NAME}} exactly once, found " +
                    std::to_string(n));
  }
  if (CountOccurrences(system_text_, kProductNamePlaceholder) != 0) {
    throw Error(ErrorKind::kInvalidTemplate,
                "system text must not contain {{PRODUCT_NAME}}");
  }
  if (wrapper_ == ChatWrapper::kNone && !system_text_.empty()) {
    throw Error(ErrorKind::kInvalidTemplate,
                "system text requires the inst_sys wrapper");
  }
}

PromptTemplate PromptTemplate::Parse(std::string_view text) {
  if (!text.starts_with("<<SYS>>")) {
    return PromptTemplate("", std::string(text), ChatWrapper::kNone);
  }
  const auto fail = [](const std::string& why) {
    return Error(ErrorKind::kInvalidTemplate, "chat template layout: " + why);
  };
  if (!text.starts_with(kSysOpen)) throw fail("expected '<<SYS>> ' line");
  const auto sys_end = text.find(kSysClose, kSysOpen.size());
  if (sys_end == std::string_view::npos) throw fail("missing '<</SYS>> ' line");
  std::string system(text.substr(kSysOpen.size(), sys_end - kSysOpen.size()));
  auto rest = text.substr(sys_end + kSysClose.size());
  if (!rest.starts_with(kBetweenBlocks)) throw fail("expected two blank lines after <</SYS>>");
  rest.remove_prefix(kBetweenBlocks.size());
  if (!rest.starts_with(kInstOpen)) throw fail("expected '[INST] ' line");
  rest.remove_prefix(kInstOpen.size());
  if (!rest.ends_with(kInstClose)) throw fail("expected trailing '[/INST] ' line");
  rest.remove_suffix(kInstClose.size());
  PromptTemplate tmpl(std::move(system), std::string(rest), ChatWrapper::kInstSys);
  if (tmpl.Render(kProductNamePlaceholder) != text) {
    throw fail("template does not round-trip");
  }
  return tmpl;
}

PromptTemplate PromptTemplate::Load(const std::filesystem::path& path) {
  return Parse(ReadFileText(path));
}

std::string PromptTemplate::Render(std::string_view product_name) const {
  const auto pos = user_text_.find(kProductNamePlaceholder);
  std::string user;
  user.reserve(user_text_.size() + product_name.size());
  user.append(user_text_, 0, pos);
  user.append(product_name);
  user.append(user_text_, pos + kProductNamePlaceholder.size());
  if (wrapper_ == ChatWrapper::kNone) return user;

  std::string out;
  out.append(kSysOpen).append(system_text_).append(kSysClose);
  out.append(kBetweenBlocks).append(kInstOpen).append(user).append(kInstClose);
  return out;
}

std::string RenderLlmPrompt(const Product& product, const PromptTemplate& tmpl) {
  return tmpl.Render(product.name);
}

SanitizeMode ParseSanitizeMode(std::string_view text) {
  if (text == "strict") return SanitizeMode::kStrict;
  if (text == "lenient") return SanitizeMode::kLenient;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown sanitize mode '" + std::string(text) + "' (strict|lenient)");
}

std::string_view SanitizeModeName(SanitizeMode mode) {
  return mode == SanitizeMode::kStrict ? "strict" : "lenient";
}

std::string_view ViolationName(Violation v) {
  switch (v) {
    case Violation::kEmoji: return "emoji";
    case Violation::kDigits: return "digits";
    case Violation::kDisallowedCharacter: return "disallowed_character";
  }
  return "unknown";
}

SanitizeResult SanitizeOutput(std::string_view raw, SanitizeMode mode) {
  SanitizeResult result;
  const auto note = [&](Violation v) {
    if (std::find(result.violations.begin(), result.violations.end(), v) ==
        result.violations.end()) {
      result.violations.push_back(v);
    }
  };

  std::string kept;
  kept.reserve(raw.size());
  std::size_t pos = 0;
  while (pos < raw.size()) {
    const auto cp = DecodeUtf8(raw, pos);
    if (!cp) {
      note(Violation::kDisallowedCharacter);
      continue;
    }
    const char32_t c = *cp;
    if (IsAsciiLetter(c) || IsKeptPunctuation(c)) {
      kept.push_back(static_cast<char>(c));
    } else if (c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      kept.push_back(' ');
    } else if (IsDigit(c)) {
      note(Violation::kDigits);
      if (mode == SanitizeMode::kLenient) kept.push_back(static_cast<char>(c));
    } else if (IsEmoji(c)) {
      note(Violation::kEmoji);
    } else {
      note(Violation::kDisallowedCharacter);
    }
  }

  std::string text = NormalizeSpaces(kept);
  if (const auto period = text.find('.'); period != std::string::npos) {
    text.resize(period + 1);
  }
  const bool has_content = std::any_of(text.begin(), text.end(), [](char c) {
    return IsAsciiLetter(static_cast<unsigned char>(c)) ||
           IsDigit(static_cast<unsigned char>(c));
  });
  if (!has_content) {
    throw Error(ErrorKind::kEmptyOutput, "text is empty after sanitation");
  }
  result.text = std::move(text);
  return result;
}

std::optional<AttributeTuple> ParseTuple(std::string_view sentence) {
  const std::string normalized = NormalizeSpaces(sentence);
  const std::string_view s = normalized;
  constexpr std::string_view kIn = " in ";
  constexpr std::string_view kWith = " with ";
  const auto in_pos = s.rfind(kIn);
  if (in_pos == std::string_view::npos) return std::nullopt;
  const auto head = s.substr(0, in_pos);
  const auto with_pos = head.find(kWith);
  if (with_pos == std::string_view::npos) return std::nullopt;

  AttributeTuple t{std::string(head.substr(0, with_pos)),
                   std::string(head.substr(with_pos + kWith.size())),
                   std::string(s.substr(in_pos + kIn.size()))};
  if (t.subject.empty() || t.keywords.empty() || t.setting.empty()) {
    return std::nullopt;
  }
  return t;
}

nlohmann::json ToJson(const ExtractionResult& r) {
  nlohmann::json violations = nlohmann::json::array();
  for (auto v : r.violations) violations.push_back(ViolationName(v));
  nlohmann::json parsed = nullptr;
  if (r.parsed) {
    parsed = {{"subject", r.parsed->subject},
              {"keywords", r.parsed->keywords},
              {"setting", r.parsed->setting}};
  }
  return {{"product_id", r.product_id},
          {"raw_output", r.raw_output},
          {"sanitized_output", r.sanitized_output},
          {"parsed", parsed},
          {"violations", violations}};
}

ExtractionResult ExtractionFromJson(const nlohmann::json& j) {
  ExtractionResult r;
  r.product_id = j.at("product_id").get<std::string>();
  r.raw_output = j.value("raw_output", "");
  r.sanitized_output = j.at("sanitized_output").get<std::string>();
  if (auto it = j.find("parsed"); it != j.end() && it->is_object()) {
    r.parsed = AttributeTuple{it->at("subject").get<std::string>(),
                              it->at("keywords").get<std::string>(),
                              it->at("setting").get<std::string>()};
  }
  for (const auto& v : j.value("violations", nlohmann::json::array())) {
    const auto name = v.get<std::string>();
    if (name == "emoji") r.violations.push_back(Violation::kEmoji);
    else if (name == "digits") r.violations.push_back(Violation::kDigits);
    else r.violations.push_back(Violation::kDisallowedCharacter);
  }
  return r;
}

ExtractionResult ExtractAttributes(const Product& product,
                                   const PromptTemplate& tmpl,
                                   TextGenClient& client,
                                   const ExtractionOptions& options,
                                   JsonlWriter* ledger) {
  TextGenRequest request{RenderLlmPrompt(product, tmpl), options.max_tokens,
                         options.temperature, options.seed};
  ExtractionResult result;
  result.product_id = product.product_id;
  try {
    result.raw_output = CallWithRetry(options.retry, options.sleep,
                                      [&] { return client.Generate(request); });
    if (TrimWhitespace(result.raw_output).empty()) {
      throw Error(ErrorKind::kEmptyOutput,
                  "text generation returned an empty reply for product " +
                      product.product_id);
    }
    auto sanitized = SanitizeOutput(result.raw_output, options.mode);
    result.sanitized_output = std::move(sanitized.text);
    result.violations = std::move(sanitized.violations);
    result.parsed = ParseTuple(result.sanitized_output);
  } catch (const Error& e) {
    if (ledger) {
      ledger->Append({{"product_id", product.product_id},
                      {"raw_output", result.raw_output},
                      {"error", ErrorKindName(e.kind())},
                      {"message", e.what()}});
    }
    throw;
  }
  if (ledger) ledger->Append(ToJson(result));
  return result;
}

}  // namespace bannerforge
