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

#include "bannerforge/svr_model.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "bannerforge/error.h"
#include "bannerforge/jsonl.h"
#include "bannerforge/util.h"

namespace bannerforge::brisque {
namespace {

Error Malformed(std::size_t line, const std::string& why) {
  return Error(ErrorKind::kMalformedModel,
               "model line " + std::to_string(line) + ": " + why);
}

double ParseDouble(std::string_view token, std::size_t line, ErrorKind kind,
                   const char* what) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(kind, "line " + std::to_string(line) + ": bad " + what + " '" +
                          std::string(token) + "'");
  }
  return value;
}

long ParseIndex(std::string_view token, std::size_t line, ErrorKind kind) {
  long value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(kind, "line " + std::to_string(line) + ": bad feature index '" +
                          std::string(token) + "'");
  }
  if (value < 1 || value > kFeatureCount) {
    throw Error(kind, "line " + std::to_string(line) + ": feature index " +
                          std::to_string(value) + " outside [1, 36]");
  }
  return value;
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SvrModel ParseSvrModel(std::string_view model_text, std::string_view range_text) {
  SvrModel model;
  const auto lines = Lines(model_text);
  std::optional<double> gamma, rho;
  std::optional<long> total_sv;
  bool kernel_seen = false;
  bool type_seen = false;
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    const auto tokens = SplitWhitespace(lines[i]);
    const std::size_t line = i + 1;
    if (tokens.empty()) continue;
    const auto key = tokens[0];
    if (key == "SV") break;
    if (tokens.size() < 2) throw Malformed(line, "header key without value");
    if (key == "svm_type") {
      if (tokens[1] != "epsilon_svr" && tokens[1] != "nu_svr") {
        throw Malformed(line, "unsupported svm_type " + std::string(tokens[1]));
      }
      model.svm_type = std::string(tokens[1]);
      type_seen = true;
    } else if (key == "kernel_type") {
      if (tokens[1] != "rbf") {
        throw Malformed(line, "unsupported kernel_type " + std::string(tokens[1]));
      }
      kernel_seen = true;
    } else if (key == "gamma") {
      gamma = ParseDouble(tokens[1], line, ErrorKind::kMalformedModel, "gamma");
    } else if (key == "rho") {
      rho = ParseDouble(tokens[1], line, ErrorKind::kMalformedModel, "rho");
    } else if (key == "total_sv") {
      long count = 0;
      const auto* end = tokens[1].data() + tokens[1].size();
      const auto [ptr, ec] = std::from_chars(tokens[1].data(), end, count);
      if (ec != std::errc() || ptr != end) throw Malformed(line, "bad total_sv");
      total_sv = count;
    } else if (key == "nr_class" || key == "degree" || key == "coef0" ||
               key == "label" || key == "nr_sv" || key == "probA" ||
               key == "probB") {
      // Present in libsvm output; irrelevant for regression scoring.
    } else {
      throw Malformed(line, "unknown header key '" + std::string(key) + "'");
    }
  }
  if (i == lines.size()) throw Malformed(i, "missing 'SV' section");
  if (!type_seen) throw Malformed(i + 1, "missing svm_type");
  if (!kernel_seen) throw Malformed(i + 1, "missing kernel_type");
  if (!gamma) throw Malformed(i + 1, "missing gamma");
  if (!rho) throw Malformed(i + 1, "missing rho");
  if (!total_sv || *total_sv < 1) throw Malformed(i + 1, "missing or zero total_sv");
  model.gamma = *gamma;
  model.rho = *rho;

  for (++i; i < lines.size(); ++i) {
    const auto tokens = SplitWhitespace(lines[i]);
    const std::size_t line = i + 1;
    if (tokens.empty()) continue;
    SupportVector sv;
    sv.coefficient = ParseDouble(tokens[0], line, ErrorKind::kMalformedModel,
                                 "coefficient");
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) throw Malformed(line, "expected idx:value");
      const long idx = ParseIndex(tokens[t].substr(0, colon), line,
                                  ErrorKind::kMalformedModel);
      sv.features[idx - 1] = ParseDouble(tokens[t].substr(colon + 1), line,
                                         ErrorKind::kMalformedModel, "feature value");
    }
    model.support_vectors.push_back(sv);
  }
  if (static_cast<long>(model.support_vectors.size()) != *total_sv) {
    throw Malformed(lines.size(), "total_sv " + std::to_string(*total_sv) +
                                      " but found " +
                                      std::to_string(model.support_vectors.size()) +
                                      " support vectors");
  }

  // Range file.
  const auto range_lines = Lines(range_text);
  std::size_t r = 0;
  const auto next_nonblank = [&]() -> std::vector<std::string_view> {
    for (; r < range_lines.size(); ++r) {
      auto tokens = SplitWhitespace(range_lines[r]);
      if (!tokens.empty()) {
        ++r;
        return tokens;
      }
    }
    return {};
  };
  auto header = next_nonblank();
  if (header.size() != 1 || header[0] != "x") {
    throw Error(ErrorKind::kMalformedModel, "range file must start with 'x'");
  }
  auto target = next_nonblank();
  if (target.size() != 2) {
    throw Error(ErrorKind::kMalformedModel, "range file lacks '<lower> <upper>' line");
  }
  model.target_lower = ParseDouble(target[0], r, ErrorKind::kMalformedModel, "lower");
  model.target_upper = ParseDouble(target[1], r, ErrorKind::kMalformedModel, "upper");
  if (model.target_lower >= model.target_upper) {
    throw Error(ErrorKind::kInvalidRange, "scaling target lower >= upper");
  }
  std::array<bool, kFeatureCount> seen{};
  for (auto tokens = next_nonblank(); !tokens.empty(); tokens = next_nonblank()) {
    if (tokens.size() != 3) {
      throw Error(ErrorKind::kMalformedModel,
                  "range line " + std::to_string(r) + ": expected '<idx> <lower> <upper>'");
    }
    const long idx = ParseIndex(tokens[0], r, ErrorKind::kMalformedModel);
    FeatureRange range{ParseDouble(tokens[1], r, ErrorKind::kMalformedModel, "lower"),
                       ParseDouble(tokens[2], r, ErrorKind::kMalformedModel, "upper")};
    if (range.lower >= range.upper) {
      throw Error(ErrorKind::kInvalidRange,
                  "range line " + std::to_string(r) + ": feature " +
                      std::to_string(idx) + " has lower >= upper");
    }
    model.ranges[idx - 1] = range;
    seen[idx - 1] = true;
  }
  for (int k = 0; k < kFeatureCount; ++k) {
    if (!seen[k]) {
      throw Error(ErrorKind::kMalformedModel,
                  "range file has no entry for feature " + std::to_string(k + 1));
    }
  }
  return model;
}

SvrModel LoadSvrModel(const std::filesystem::path& model_path,
                      const std::filesystem::path& range_path) {
  return ParseSvrModel(ReadFileText(model_path), ReadFileText(range_path));
}

std::pair<std::string, std::string> SerializeSvrModel(const SvrModel& model) {
  std::ostringstream m;
  m << "svm_type " << model.svm_type << "\n"
    << "kernel_type rbf\n"
    << "gamma " << FormatDouble(model.gamma) << "\n"
    << "nr_class 2\n"
    << "total_sv " << model.support_vectors.size() << "\n"
    << "rho " << FormatDouble(model.rho) << "\n"
    << "SV\n";
  for (const auto& sv : model.support_vectors) {
    m << FormatDouble(sv.coefficient);
    for (int k = 0; k < kFeatureCount; ++k) {
      if (sv.features[k] != 0.0) m << ' ' << (k + 1) << ':' << FormatDouble(sv.features[k]);
    }
    m << '\n';
  }
  std::ostringstream r;
  r << "x\n" << FormatDouble(model.target_lower) << ' '
    << FormatDouble(model.target_upper) << '\n';
  for (int k = 0; k < kFeatureCount; ++k) {
    r << (k + 1) << ' ' << FormatDouble(model.ranges[k].lower) << ' '
      << FormatDouble(model.ranges[k].upper) << '\n';
  }
  return {m.str(), r.str()};
}

FeatureVector ScaleFeatures(const FeatureVector& features, const SvrModel& model) {
  FeatureVector scaled{};
  const double span = model.target_upper - model.target_lower;
  for (int k = 0; k < kFeatureCount; ++k) {
    const auto& range = model.ranges[k];
    scaled[k] = model.target_lower +
                span * (features[k] - range.lower) / (range.upper - range.lower);
  }
  return scaled;
}

double Score(const FeatureVector& features, const SvrModel& model) {
  const FeatureVector x = ScaleFeatures(features, model);
  double sum = 0.0;
  for (const auto& sv : model.support_vectors) {
    double dist_sq = 0.0;
    for (int k = 0; k < kFeatureCount; ++k) {
      const double d = x[k] - sv.features[k];
      dist_sq += d * d;
    }
    sum += sv.coefficient * std::exp(-model.gamma * dist_sq);
  }
  return sum - model.rho;
}

ScoreSummary SummarizeScores(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorKind::kEmptyInput, "no scores to summarize");
  const double n = static_cast<double>(scores.size());
  double sum = 0.0;
  for (double s : scores) sum += s;
  ScoreSummary summary;
  summary.mean = sum / n;
  double ss = 0.0;
  for (double s : scores) ss += (s - summary.mean) * (s - summary.mean);
  summary.std_dev = std::sqrt(ss / n);
  return summary;
}

}  // namespace bannerforge::brisque
