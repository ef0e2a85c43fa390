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

#ifndef BANNERFORGE_JSONL_H_
#define BANNERFORGE_JSONL_H_

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bannerforge {

using Json = nlohmann::json;

// Append-only line-delimited json file. All appends go through one mutex and
// are flushed per line, so readers opening the file afterwards see whole lines.
class JsonlWriter {
 public:
  explicit JsonlWriter(std::filesystem::path path);

  JsonlWriter(const JsonlWriter&) = delete;
  JsonlWriter& operator=(const JsonlWriter&) = delete;

  void Append(const Json& record);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mu_;
  std::ofstream out_;
};

struct JsonlLine {
  std::size_t line_number = 0;  // 1-based
  Json value;
};

// Blank lines are skipped. Throws Error(kParse) naming the line on bad json,
// Error(kIo) when the file cannot be opened.
std::vector<JsonlLine> ReadJsonl(const std::filesystem::path& path);
std::vector<JsonlLine> ParseJsonl(const std::string& text);

std::string ReadFileText(const std::filesystem::path& path);
void WriteFileText(const std::filesystem::path& path, const std::string& text);

}  // namespace bannerforge

#endif  // BANNERFORGE_JSONL_H_
