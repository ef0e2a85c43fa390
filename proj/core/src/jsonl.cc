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

#include "bannerforge/jsonl.h"

#include <sstream>

#include "bannerforge/error.h"
#include "bannerforge/util.h"

namespace bannerforge {

JsonlWriter::JsonlWriter(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path_.parent_path(), ec);
  }
  out_.open(path_, std::ios::app | std::ios::binary);
  if (!out_) throw Error(ErrorKind::kIo, "cannot open ledger " + path_.string());
}

void JsonlWriter::Append(const Json& record) {
  const std::string line = record.dump();
  std::lock_guard lock(mu_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorKind::kIo, "write failed on " + path_.string());
}

std::vector<JsonlLine> ParseJsonl(const std::string& text) {
  std::vector<JsonlLine> lines;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (TrimWhitespace(line).empty()) continue;
    try {
      lines.push_back({number, Json::parse(line)});
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::kParse,
                  "line " + std::to_string(number) + ": invalid json: " + e.what());
    }
  }
  return lines;
}

std::vector<JsonlLine> ReadJsonl(const std::filesystem::path& path) {
  return ParseJsonl(ReadFileText(path));
}

std::string ReadFileText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileText(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed on " + path.string());
}

}  // namespace bannerforge
