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

#ifndef BANNERFORGE_SVR_MODEL_H_
#define BANNERFORGE_SVR_MODEL_H_

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bannerforge/brisque.h"

namespace bannerforge::brisque {

struct SupportVector {
  double coefficient = 0.0;
  FeatureVector features{};
};

struct FeatureRange {
  double lower = 0.0;
  double upper = 0.0;
};

// epsilon-SVR with an RBF kernel over scaled BRISQUE features, read from the
// usual libsvm text model plus an svm-scale range file.
struct SvrModel {
  std::string svm_type = "epsilon_svr";
  double gamma = 0.0;
  double rho = 0.0;
  std::vector<SupportVector> support_vectors;
  double target_lower = -1.0;
  double target_upper = 1.0;
  std::array<FeatureRange, kFeatureCount> ranges{};
};

// Model text: header lines (svm_type, kernel_type rbf, gamma, rho, total_sv,
// plus ignorable libsvm keys such as nr_class), then "SV" and total_sv lines
// of "<coef> <idx>:<val> ..." with 1-based sparse indices. Range text: "x",
// "<lower> <upper>", then "<idx> <min> <max>" for each of the 36 features.
// Throws Error(kMalformedModel) or Error(kInvalidRange).
SvrModel ParseSvrModel(std::string_view model_text, std::string_view range_text);
SvrModel LoadSvrModel(const std::filesystem::path& model_path,
                      const std::filesystem::path& range_path);

// Inverse of ParseSvrModel; values are written with round-trip precision.
std::pair<std::string, std::string> SerializeSvrModel(const SvrModel& model);

FeatureVector ScaleFeatures(const FeatureVector& features, const SvrModel& model);

// sum_k coef_k * exp(-gamma * |x - sv_k|^2) - rho over scaled features.
double Score(const FeatureVector& features, const SvrModel& model);

struct ScoreSummary {
  double mean = 0.0;
  double std_dev = 0.0;  // population
};

// Throws Error(kEmptyInput).
ScoreSummary SummarizeScores(std::span<const double> scores);

}  // namespace bannerforge::brisque

#endif  // BANNERFORGE_SVR_MODEL_H_
