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

#include "bannerforge/catalog.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>

#include "bannerforge/error.h"
#include "bannerforge/jsonl.h"
#include "bannerforge/util.h"

namespace bannerforge {
namespace {

constexpr std::size_t kMaxNameLength = 1000;
constexpr std::array<std::string_view, 4> kColumns = {"product_id", "name",
                                                      "product_type", "cohort"};

std::string Where(std::size_t line) {
  return line == 0 ? std::string() : "line " + std::to_string(line) + ": ";
}

void Validate(Product& p, std::size_t line) {
  if (p.product_id.empty()) {
    throw Error(ErrorKind::kMissingField, Where(line) + "empty product_id");
  }
  if (TrimWhitespace(p.name).empty()) {
    throw Error(ErrorKind::kMissingField,
                Where(line) + "empty name for product " + p.product_id);
  }
  if (CountCodePoints(p.name) > kMaxNameLength) {
    throw Error(ErrorKind::kInvalidArgument,
                Where(line) + "name longer than 1000 characters for product " +
                    p.product_id);
  }
  if (p.product_type.empty()) {
    throw Error(ErrorKind::kMissingField,
                Where(line) + "empty product_type for product " + p.product_id);
  }
  if (p.cohort.empty()) p.cohort = p.product_type;
}

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Comma separated, double-quote escaping, quoted fields may span lines.
std::vector<CsvRecord> ParseCsv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = CsvRecord{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorKind::kParse,
                      Where(line) + "unexpected quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        ++line;
        end_record();
        break;
      default:
        if (field_was_quoted) {
          throw Error(ErrorKind::kParse,
                      Where(line) + "characters after closing quote");
        }
        field.push_back(c);
    }
  }
  if (in_quotes) {
    throw Error(ErrorKind::kParse,
                Where(current.line) + "unterminated quoted field");
  }
  if (!field.empty() || field_was_quoted || !current.fields.empty()) end_record();
  return records;
}

Catalog ParseCsvCatalog(std::string_view text) {
  auto records = ParseCsv(text);
  if (records.empty()) throw Error(ErrorKind::kParse, "missing csv header row");
  const auto& header = records.front().fields;
  std::array<std::optional<std::size_t>, kColumns.size()> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = TrimWhitespace(header[i]);
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
      if (name == kColumns[k]) column[k] = i;
    }
  }
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    if (!column[k]) {
      throw Error(ErrorKind::kMissingField,
                  "line 1: header lacks required column '" +
                      std::string(kColumns[k]) + "'");
    }
  }

  std::vector<Product> products;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw Error(ErrorKind::kParse,
                  Where(rec.line) + "expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(rec.fields.size()));
    }
    Product p{rec.fields[*column[0]], rec.fields[*column[1]],
              rec.fields[*column[2]], rec.fields[*column[3]]};
    Validate(p, rec.line);
    if (!seen.emplace(p.product_id, rec.line).second) {
      throw Error(ErrorKind::kDuplicateId,
                  Where(rec.line) + "duplicate product_id '" + p.product_id + "'");
    }
    products.push_back(std::move(p));
  }
  return Catalog(std::move(products));
}

Catalog ParseJsonlCatalog(std::string_view text) {
  std::vector<Product> products;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& [line, value] : ParseJsonl(std::string(text))) {
    if (!value.is_object()) {
      throw Error(ErrorKind::kParse, Where(line) + "expected a json object");
    }
    std::array<std::string, kColumns.size()> fields;
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
      const std::string key(kColumns[k]);
      auto it = value.find(key);
      const bool nullable_cohort = k == 3 && it != value.end() && it->is_null();
      if (it == value.end()) {
        throw Error(ErrorKind::kMissingField,
                    Where(line) + "missing required field '" + key + "'");
      }
      if (nullable_cohort) continue;
      if (!it->is_string()) {
        throw Error(ErrorKind::kParse,
                    Where(line) + "field '" + key + "' must be a string");
      }
      fields[k] = it->get<std::string>();
    }
    Product p{fields[0], fields[1], fields[2], fields[3]};
    Validate(p, line);
    if (!seen.emplace(p.product_id, line).second) {
      throw Error(ErrorKind::kDuplicateId,
                  Where(line) + "duplicate product_id '" + p.product_id + "'");
    }
    products.push_back(std::move(p));
  }
  return Catalog(std::move(products));
}

std::string CsvField(const std::string& value) {
  const bool needs_quotes =
      value.find_first_of(",\"\r\n") != std::string::npos ||
      (!value.empty() && (value.front() == ' ' || value.back() == ' '));
  if (!needs_quotes) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

CatalogFormat ParseCatalogFormat(std::string_view text) {
  const auto lower = ToLowerAscii(text);
  if (lower == "csv") return CatalogFormat::kCsv;
  if (lower == "jsonl") return CatalogFormat::kJsonl;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown catalog format '" + std::string(text) + "' (csv|jsonl)");
}

CatalogFormat FormatFromPath(const std::filesystem::path& path) {
  const auto ext = ToLowerAscii(path.extension().string());
  if (ext == ".csv") return CatalogFormat::kCsv;
  if (ext == ".jsonl" || ext == ".ndjson") return CatalogFormat::kJsonl;
  throw Error(ErrorKind::kInvalidArgument,
              "cannot infer catalog format from " + path.string());
}

Catalog::Catalog(std::vector<Product> products) : products_(std::move(products)) {
  index_.reserve(products_.size());
  for (std::size_t i = 0; i < products_.size(); ++i) {
    Validate(products_[i], 0);
    if (!index_.emplace(products_[i].product_id, i).second) {
      throw Error(ErrorKind::kDuplicateId,
                  "duplicate product_id '" + products_[i].product_id + "'");
    }
  }
}

const Product* Catalog::Find(std::string_view product_id) const {
  auto it = index_.find(std::string(product_id));
  return it == index_.end() ? nullptr : &products_[it->second];
}

std::vector<Product> Catalog::OfType(std::string_view product_type) const {
  std::vector<Product> out;
  for (const auto& p : products_) {
    if (p.product_type == product_type) out.push_back(p);
  }
  return out;
}

Catalog IngestCatalog(const std::filesystem::path& path, CatalogFormat format) {
  return ParseCatalog(ReadFileText(path), format);
}

Catalog ParseCatalog(std::string_view text, CatalogFormat format) {
  return format == CatalogFormat::kCsv ? ParseCsvCatalog(text)
                                       : ParseJsonlCatalog(text);
}

std::string SerializeCatalog(const Catalog& catalog, CatalogFormat format) {
  std::string out;
  if (format == CatalogFormat::kCsv) {
    out = "product_id,name,product_type,cohort\n";
    for (const auto& p : catalog.products()) {
      out += CsvField(p.product_id) + ',' + CsvField(p.name) + ',' +
             CsvField(p.product_type) + ',' + CsvField(p.cohort) + '\n';
    }
  } else {
    for (const auto& p : catalog.products()) out += ToJson(p).dump() + '\n';
  }
  return out;
}

WordCountStats ComputeWordCountStats(const Catalog& catalog) {
  if (catalog.empty()) {
    throw Error(ErrorKind::kEmptyInput, "word count statistics need a non-empty catalog");
  }
  std::vector<std::uint64_t> counts;
  counts.reserve(catalog.size());
  for (const auto& p : catalog.products()) counts.push_back(CountWords(p.name));

  WordCountStats stats;
  stats.count = counts.size();
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  stats.min = *lo;
  stats.max = *hi;
  const double n = static_cast<double>(counts.size());
  const double sum = std::accumulate(counts.begin(), counts.end(), 0.0);
  stats.mean = sum / n;
  double ss = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - stats.mean;
    ss += d * d;
  }
  stats.std_dev = std::sqrt(ss / n);
  return stats;
}

nlohmann::json ToJson(const WordCountStats& stats) {
  return {{"mean", stats.mean},
          {"std_dev", stats.std_dev},
          {"min", stats.min},
          {"max", stats.max},
          {"count", stats.count}};
}

nlohmann::json ToJson(const Product& product) {
  return {{"product_id", product.product_id},
          {"name", product.name},
          {"product_type", product.product_type},
          {"cohort", product.cohort}};
}

std::vector<Product> SampleItems(const Catalog& catalog,
                                 std::string_view product_type, std::size_t n,
                                 std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "sample size must be positive");
  auto pool = catalog.OfType(product_type);
  if (pool.size() < n) {
    throw Error(ErrorKind::kInsufficientItems,
                "requested " + std::to_string(n) + " items of type '" +
                    std::string(product_type) + "' but only " +
                    std::to_string(pool.size()) + " exist");
  }
  // Partial Fisher-Yates: the first n slots are a uniform n-permutation.
  SeededRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.Below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

}  // namespace bannerforge
