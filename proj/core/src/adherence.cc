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

#include "bannerforge/adherence.h"

#include <algorithm>
#include <cctype>

#include "bannerforge/error.h"
#include "bannerforge/util.h"

namespace bannerforge {
namespace {

std::string HeadNoun(std::string_view text) {
  const auto words = SplitWhitespace(text);
  if (words.empty()) return {};
  std::string token;
  for (char c : words.back()) {
    if (std::isalnum(static_cast<unsigned char>(c))) token.push_back(c);
  }
  return ToLowerAscii(token);
}

void CheckBatch(std::span<const ParItem> batch, double threshold) {
  if (batch.empty()) throw Error(ErrorKind::kEmptyInput, "PAR needs a non-empty batch");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "presence threshold must be in [0, 1]");
  }
  for (const auto& item : batch) {
    if (item.objects.labels.empty()) {
      throw Error(ErrorKind::kEmptyInput,
                  "prompt " + item.objects.prompt_id + " has no object labels");
    }
    auto labels = item.objects.labels;
    for (auto& l : labels) l = ToLowerAscii(l);
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "prompt " + item.objects.prompt_id + " has duplicate labels");
    }
  }
}

}  // namespace

PromptObjects ExtractObjects(const ImagePrompt& prompt,
                             const ExtractionResult* extraction,
                             std::string_view prompt_id) {
  if (prompt.text.empty()) throw Error(ErrorKind::kInvalidArgument, "empty prompt");
  const bool use_subject = extraction != nullptr && extraction->parsed.has_value();
  const std::string label =
      HeadNoun(use_subject ? std::string_view(extraction->parsed->subject)
                           : std::string_view(prompt.text));
  if (label.empty()) {
    throw Error(ErrorKind::kEmptyLabel,
                "no object label could be extracted from prompt '" + prompt.text + "'");
  }
  PromptObjects objects;
  objects.prompt_id = prompt_id.empty()
                          ? prompt.product_id + "/" + std::string(StrategyName(prompt.strategy))
                          : std::string(prompt_id);
  objects.labels.push_back(label);
  return objects;
}

std::map<std::string, int> Presence(const PromptObjects& objects,
                                    std::span<const Detection> detections,
                                    double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "presence threshold must be in [0, 1]");
  }
  std::map<std::string, int> presence;
  for (const auto& label : objects.labels) {
    const auto key = ToLowerAscii(label);
    const bool found = std::any_of(
        detections.begin(), detections.end(), [&](const Detection& d) {
          return ToLowerAscii(d.label) == key && d.confidence >= threshold;
        });
    presence[label] = found ? 1 : 0;
  }
  return presence;
}

double ParScore(std::span<const ParItem> batch, double threshold) {
  CheckBatch(batch, threshold);
  std::size_t present = 0;
  std::size_t total = 0;
  for (const auto& item : batch) {
    for (const auto& [label, hit] : Presence(item.objects, item.detections, threshold)) {
      present += static_cast<std::size_t>(hit);
      ++total;
    }
  }
  return static_cast<double>(present) / static_cast<double>(total);
}

double PerPromptMeanPar(std::span<const ParItem> batch, double threshold) {
  CheckBatch(batch, threshold);
  double sum = 0.0;
  for (const auto& item : batch) {
    const auto presence = Presence(item.objects, item.detections, threshold);
    std::size_t present = 0;
    for (const auto& [label, hit] : presence) present += static_cast<std::size_t>(hit);
    sum += static_cast<double>(present) / static_cast<double>(presence.size());
  }
  return sum / static_cast<double>(batch.size());
}

}  // namespace bannerforge
