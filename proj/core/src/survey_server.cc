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

#include "bannerforge/survey_server.h"

#include <httplib.h>

#include "bannerforge/error.h"

namespace bannerforge {
namespace {

void SendJson(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& kind,
               const std::string& message) {
  SendJson(res, status, {{"error", kind}, {"message", message}});
}

int StatusFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnknownTask:
    case ErrorKind::kMissingImage:
      return 404;
    case ErrorKind::kIo:
      return 500;
    default:
      return 400;
  }
}

}  // namespace

struct SurveyServer::Impl {
  std::shared_ptr<const SurveyManifest> manifest;
  RatingStore& ratings;
  const ImageStore& images;
  httplib::Server server;

  Impl(std::shared_ptr<const SurveyManifest> m, RatingStore& r, const ImageStore& i)
      : manifest(std::move(m)), ratings(r), images(i) {}

  nlohmann::json SurveyFor(const std::string& rater_id) const {
    auto view = BlindedManifest(*manifest, rater_id);
    const auto snapshot = ratings.Snapshot();
    for (auto& task : view["tasks"]) {
      const auto product_id = task["product_id"].get<std::string>();
      for (auto& slot : task["slots"]) {
        const auto method = ResolveSlot(rater_id, product_id,
                                        slot["slot"].get<std::string>(), manifest->seed);
        slot["rating"] = nullptr;
        for (const auto& r : snapshot) {
          if (r.rater_id == rater_id && r.product_id == product_id && r.method == method) {
            slot["rating"] = RatingToken(r.rating);
          }
        }
      }
    }
    return view;
  }

  void Routes() {
    server.Get("/api/survey", [this](const httplib::Request& req, httplib::Response& res) {
      const auto rater_id = req.get_param_value("rater_id");
      if (rater_id.empty()) {
        SendError(res, 400, "missing_field", "query parameter rater_id is required");
        return;
      }
      SendJson(res, 200, SurveyFor(rater_id));
    });

    server.Get(R"(/api/image/([0-9a-f]{64}))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 const std::string hash = req.matches[1];
                 if (!images.Contains(hash)) {
                   SendError(res, 404, "missing_image", "no image " + hash);
                   return;
                 }
                 const auto bytes = images.Load(hash);
                 res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
               });

    server.Post("/api/ratings", [this](const httplib::Request& req, httplib::Response& res) {
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::exception& e) {
        SendError(res, 400, "parse_error", e.what());
        return;
      }
      try {
        for (const char* key : {"rater_id", "product_id", "method_slot", "rating"}) {
          if (!body.contains(key) || !body[key].is_string()) {
            throw Error(ErrorKind::kMissingField,
                        std::string("field '") + key + "' must be a string");
          }
        }
        RatingRecord record;
        record.rater_id = body["rater_id"].get<std::string>();
        record.product_id = body["product_id"].get<std::string>();
        record.rating = ParseRating(body["rating"].get<std::string>());
        if (manifest->Find(record.product_id) == nullptr) {
          throw Error(ErrorKind::kUnknownTask,
                      "product " + record.product_id + " is not part of the survey");
        }
        const auto slot = body["method_slot"].get<std::string>();
        record.method = ResolveSlot(record.rater_id, record.product_id, slot, manifest->seed);
        const auto stored = ratings.Record(record);
        SendJson(res, 201,
                 {{"rater_id", stored.rater_id},
                  {"product_id", stored.product_id},
                  {"method_slot", slot},
                  {"rating", RatingToken(stored.rating)},
                  {"submitted_at", stored.submitted_at},
                  {"submissions",
                   ratings.AuditCount(stored.rater_id, stored.product_id, stored.method)}});
      } catch (const Error& e) {
        nlohmann::json err = {{"error", ErrorKindName(e.kind())}, {"message", e.what()}};
        if (e.kind() == ErrorKind::kInvalidRating) {
          err["allowed"] = {"low", "medium", "high"};
        }
        SendJson(res, StatusFor(e.kind()), err);
      }
    });

    server.Get("/api/report", [this](const httplib::Request&, httplib::Response& res) {
      const auto snapshot = ratings.Snapshot();
      SendJson(res, 200, SurveyReport(snapshot, manifest.get()));
    });
  }
};

SurveyServer::SurveyServer(std::shared_ptr<const SurveyManifest> manifest,
                           RatingStore& ratings, const ImageStore& images,
                           std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(std::move(manifest), ratings, images)) {
  impl_->Routes();
  if (static_dir) impl_->server.set_mount_point("/", static_dir->string());
}

SurveyServer::~SurveyServer() { Stop(); }

int SurveyServer::BindAnyPort(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool SurveyServer::Bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port);
}

bool SurveyServer::Serve() { return impl_->server.listen_after_bind(); }

void SurveyServer::Stop() {
  if (impl_) impl_->server.stop();
}

void SurveyServer::WaitUntilReady() const { impl_->server.wait_until_ready(); }

}  // namespace bannerforge
