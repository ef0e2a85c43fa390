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

#include "bannerforge/http_clients.h"

#include <httplib.h>

#include "bannerforge/error.h"

namespace bannerforge {
namespace {

nlohmann::json PostJson(const HttpEndpoint& endpoint, const nlohmann::json& body) {
  const auto url = ParseUrl(endpoint.base_url);
  httplib::Client client(url.origin);
  client.set_connection_timeout(endpoint.connect_timeout);
  client.set_read_timeout(endpoint.read_timeout);
  client.set_write_timeout(endpoint.read_timeout);
  httplib::Headers headers;
  if (!endpoint.auth_header.empty()) {
    headers.emplace(endpoint.auth_header, endpoint.auth_value);
  }
  auto res = client.Post(url.path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorKind::kTransport, "POST " + endpoint.base_url + " failed: " +
                                           httplib::to_string(res.error()));
  }
  const int status = res->status;
  if (status == 408 || status == 429 || status >= 500) {
    throw Error(ErrorKind::kTransport, "POST " + endpoint.base_url + " returned " +
                                           std::to_string(status));
  }
  if (status < 200 || status >= 300) {
    throw Error(ErrorKind::kBackendRejected,
                "POST " + endpoint.base_url + " rejected with " +
                    std::to_string(status) + ": " + res->body.substr(0, 512));
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kDecodeFailure,
                "reply from " + endpoint.base_url + " is not json: " + e.what());
  }
}

template <typename T>
T Field(const nlohmann::json& reply, const char* key, const std::string& url) {
  try {
    return reply.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::kDecodeFailure,
                "reply from " + url + " lacks field '" + std::string(key) + "'");
  }
}

}  // namespace

ParsedUrl ParseUrl(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorKind::kConfig, "url '" + std::string(url) + "' lacks a scheme");
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorKind::kConfig, "unsupported url scheme in '" + std::string(url) + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl parsed;
  if (path_start == std::string_view::npos) {
    parsed.origin = std::string(url);
    parsed.path = "/";
  } else {
    parsed.origin = std::string(url.substr(0, path_start));
    parsed.path = std::string(url.substr(path_start));
  }
  if (parsed.origin.size() <= scheme_end + 3) {
    throw Error(ErrorKind::kConfig, "url '" + std::string(url) + "' has no host");
  }
  return parsed;
}

HttpTextGenClient::HttpTextGenClient(HttpEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  ParseUrl(endpoint_.base_url);
}

std::string HttpTextGenClient::Generate(const TextGenRequest& request) {
  nlohmann::json body = {{"prompt", request.prompt},
                         {"max_tokens", request.max_tokens},
                         {"temperature", request.temperature}};
  if (request.seed) body["seed"] = *request.seed;
  const auto reply = PostJson(endpoint_, body);
  return Field<std::string>(reply, "text", endpoint_.base_url);
}

HttpImageGenClient::HttpImageGenClient(HttpEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  ParseUrl(endpoint_.base_url);
}

Bytes HttpImageGenClient::Generate(std::string_view prompt, const GenParams& params) {
  const nlohmann::json body = {{"prompt", prompt},
                               {"width", params.width},
                               {"height", params.height},
                               {"steps", params.steps},
                               {"guidance", params.guidance},
                               {"seed", params.seed}};
  const auto reply = PostJson(endpoint_, body);
  return Base64Decode(Field<std::string>(reply, "image_b64", endpoint_.base_url));
}

HttpDetectorClient::HttpDetectorClient(HttpEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  ParseUrl(endpoint_.base_url);
}

std::vector<Detection> HttpDetectorClient::Detect(std::span<const std::uint8_t> png_bytes) {
  const auto reply = PostJson(endpoint_, {{"image_b64", Base64Encode(png_bytes)}});
  std::vector<Detection> detections;
  try {
    for (const auto& d : reply.at("detections")) {
      Detection det{d.at("label").get<std::string>(), d.at("confidence").get<double>()};
      if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
        throw Error(ErrorKind::kDecodeFailure,
                    "detection confidence outside [0, 1] from " + endpoint_.base_url);
      }
      detections.push_back(std::move(det));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kDecodeFailure,
                "malformed detector reply from " + endpoint_.base_url + ": " + e.what());
  }
  return detections;
}

}  // namespace bannerforge
