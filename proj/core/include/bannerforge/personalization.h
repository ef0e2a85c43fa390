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

#ifndef BANNERFORGE_PERSONALIZATION_H_
#define BANNERFORGE_PERSONALIZATION_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bannerforge/catalog.h"

namespace bannerforge {

struct UserAffinities {
  std::string user_id;
  std::map<std::string, double> affinities;  // cohort -> score
};

// Scores must be finite. An empty map always takes the fallback.
void ValidateAffinities(const UserAffinities& user);

struct Selection {
  std::string user_id;
  std::string product_id;
  std::string cohort;
  double affinity_used = 0.0;

  friend bool operator==(const Selection&, const Selection&) = default;
};

// Picks the candidate whose cohort has the user's highest affinity. Ties go to
// the lexicographically smallest cohort, then the smallest product_id. With no
// cohort overlap the smallest product_id wins with affinity_used = 0.
// Throws Error(kEmptyInput) for an empty candidate list.
Selection SelectItem(const UserAffinities& user, std::span<const Product> candidates);

nlohmann::json ToJson(const Selection& selection);

// One {user_id, affinities: {cohort: score}} object per line.
std::vector<UserAffinities> LoadAffinities(const std::filesystem::path& path);
std::vector<UserAffinities> ParseAffinities(const std::string& text);

}  // namespace bannerforge

#endif  // BANNERFORGE_PERSONALIZATION_H_
