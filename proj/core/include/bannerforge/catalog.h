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

#ifndef BANNERFORGE_CATALOG_H_
#define BANNERFORGE_CATALOG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace bannerforge {

struct Product {
  std::string product_id;
  std::string name;
  std::string product_type;
  std::string cohort;

  friend bool operator==(const Product&, const Product&) = default;
};

enum class CatalogFormat { kCsv, kJsonl };

CatalogFormat ParseCatalogFormat(std::string_view text);
// Infers the format from a .csv / .jsonl extension.
CatalogFormat FormatFromPath(const std::filesystem::path& path);

// Immutable, validated, file-ordered product collection.
class Catalog {
 public:
  Catalog() = default;
  // Validates every product and id uniqueness. Empty cohorts default to the
  // product type.
  explicit Catalog(std::vector<Product> products);

  const std::vector<Product>& products() const { return products_; }
  std::size_t size() const { return products_.size(); }
  bool empty() const { return products_.empty(); }

  const Product* Find(std::string_view product_id) const;
  std::vector<Product> OfType(std::string_view product_type) const;

  friend bool operator==(const Catalog& a, const Catalog& b) {
    return a.products_ == b.products_;
  }

 private:
  std::vector<Product> products_;
  std::unordered_map<std::string, std::size_t> index_;
};

Catalog IngestCatalog(const std::filesystem::path& path, CatalogFormat format);
Catalog ParseCatalog(std::string_view text, CatalogFormat format);
std::string SerializeCatalog(const Catalog& catalog, CatalogFormat format);

struct WordCountStats {
  double mean = 0.0;
  double std_dev = 0.0;  // population
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  std::uint64_t count = 0;
};

WordCountStats ComputeWordCountStats(const Catalog& catalog);
nlohmann::json ToJson(const WordCountStats& stats);

// Uniform sample without replacement among products of `product_type`,
// deterministic in `seed`. Throws Error(kInsufficientItems).
std::vector<Product> SampleItems(const Catalog& catalog,
                                 std::string_view product_type, std::size_t n,
                                 std::uint64_t seed);

nlohmann::json ToJson(const Product& product);

}  // namespace bannerforge

#endif  // BANNERFORGE_CATALOG_H_
