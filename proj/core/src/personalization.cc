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

#include "bannerforge/personalization.h"

#include <cmath>
#include <tuple>

#include "bannerforge/error.h"
#include "bannerforge/jsonl.h"

namespace bannerforge {

void ValidateAffinities(const UserAffinities& user) {
  for (const auto& [cohort, score] : user.affinities) {
    if (!std::isfinite(score)) {
      throw Error(ErrorKind::kInvalidArgument, "non-finite affinity for cohort '" +
                                                   cohort + "' of user " +
                                                   user.user_id);
    }
  }
}

Selection SelectItem(const UserAffinities& user, std::span<const Product> candidates) {
  if (candidates.empty()) {
    throw Error(ErrorKind::kEmptyInput, "no candidate items for user " + user.user_id);
  }
  ValidateAffinities(user);

  const Product* best = nullptr;
  double best_score = 0.0;
  for (const auto& p : candidates) {
    auto it = user.affinities.find(p.cohort);
    if (it == user.affinities.end()) continue;
    const double score = it->second;
    // Higher score first, then smaller cohort, then smaller product id.
    if (best == nullptr ||
        std::make_tuple(-score, std::cref(p.cohort), std::cref(p.product_id)) <
            std::make_tuple(-best_score, std::cref(best->cohort),
                            std::cref(best->product_id))) {
      best = &p;
      best_score = score;
    }
  }
  if (best == nullptr) {
    for (const auto& p : candidates) {
      if (best == nullptr || p.product_id < best->product_id) best = &p;
    }
    best_score = 0.0;
  }
  return {user.user_id, best->product_id, best->cohort, best_score};
}

nlohmann::json ToJson(const Selection& s) {
  return {{"user_id", s.user_id},
          {"product_id", s.product_id},
          {"cohort", s.cohort},
          {"affinity_used", s.affinity_used}};
}

std::vector<UserAffinities> ParseAffinities(const std::string& text) {
  std::vector<UserAffinities> users;
  for (const auto& [line, value] : ParseJsonl(text)) {
    const auto where = "line " + std::to_string(line) + ": ";
    if (!value.is_object() || !value.contains("user_id") ||
        !value.contains("affinities")) {
      throw Error(ErrorKind::kMissingField,
                  where + "expected {user_id, affinities}");
    }
    UserAffinities u;
    try {
      u.user_id = value.at("user_id").get<std::string>();
      for (const auto& [cohort, score] : value.at("affinities").items()) {
        u.affinities[cohort] = score.get<double>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse, where + e.what());
    }
    try {
      ValidateAffinities(u);
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    }
    users.push_back(std::move(u));
  }
  return users;
}

std::vector<UserAffinities> LoadAffinities(const std::filesystem::path& path) {
  return ParseAffinities(ReadFileText(path));
}

}  // namespace bannerforge
