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

#ifndef BANNERFORGE_SURVEY_SERVER_H_
#define BANNERFORGE_SURVEY_SERVER_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "bannerforge/human_eval.h"
#include "bannerforge/image_gen.h"

namespace bannerforge {

// REST surface for the rating UI:
//   GET  /api/survey?rater_id=R  blinded manifest for R with current ratings
//   GET  /api/image/<sha256>     stored PNG
//   POST /api/ratings            {rater_id, product_id, method_slot, rating} -> 201
//   GET  /api/report             survey report json
// Responses sent to raters never name the strategies.
class SurveyServer {
 public:
  SurveyServer(std::shared_ptr<const SurveyManifest> manifest, RatingStore& ratings,
               const ImageStore& images,
               std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~SurveyServer();

  SurveyServer(const SurveyServer&) = delete;
  SurveyServer& operator=(const SurveyServer&) = delete;

  // Binds to an ephemeral port and returns it; call Serve() afterwards.
  int BindAnyPort(const std::string& host = "127.0.0.1");
  bool Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool Serve();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bannerforge

#endif  // BANNERFORGE_SURVEY_SERVER_H_
