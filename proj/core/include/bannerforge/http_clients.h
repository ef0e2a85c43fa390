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

#ifndef BANNERFORGE_HTTP_CLIENTS_H_
#define BANNERFORGE_HTTP_CLIENTS_H_

#include <chrono>
#include <string>
#include <string_view>

#include "bannerforge/adherence.h"
#include "bannerforge/attribute_extraction.h"
#include "bannerforge/image_gen.h"

namespace bannerforge {

struct HttpEndpoint {
  std::string base_url;     // scheme://host[:port][/path]
  std::string auth_header;  // header name, empty for none
  std::string auth_value;
  std::chrono::seconds connect_timeout{5};
  std::chrono::seconds read_timeout{120};
};

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // at least "/"
};
// Throws Error(kConfig) for anything but http(s) URLs.
ParsedUrl ParseUrl(std::string_view url);

// Failure mapping shared by all clients: no response, 408, 429 and 5xx are
// retryable transport errors; other non-2xx replies are backend rejections;
// an unparseable body is a decode failure.

// POST {prompt, max_tokens, temperature, seed?} -> {text}.
class HttpTextGenClient : public TextGenClient {
 public:
  explicit HttpTextGenClient(HttpEndpoint endpoint);
  std::string Generate(const TextGenRequest& request) override;

 private:
  HttpEndpoint endpoint_;
};

// POST {prompt, width, height, steps, guidance, seed} -> {image_b64}.
class HttpImageGenClient : public ImageGenClient {
 public:
  explicit HttpImageGenClient(HttpEndpoint endpoint);
  Bytes Generate(std::string_view prompt, const GenParams& params) override;

 private:
  HttpEndpoint endpoint_;
};

// POST {image_b64} -> {detections: [{label, confidence}]}.
class HttpDetectorClient : public DetectorClient {
 public:
  explicit HttpDetectorClient(HttpEndpoint endpoint);
  std::vector<Detection> Detect(std::span<const std::uint8_t> png_bytes) override;

 private:
  HttpEndpoint endpoint_;
};

}  // namespace bannerforge

#endif  // BANNERFORGE_HTTP_CLIENTS_H_
