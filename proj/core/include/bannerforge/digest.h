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

#ifndef BANNERFORGE_DIGEST_H_
#define BANNERFORGE_DIGEST_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bannerforge {

using Bytes = std::vector<std::uint8_t>;

// Lowercase hex SHA-256.
std::string Sha256Hex(std::span<const std::uint8_t> data);
std::string Sha256Hex(std::string_view data);

std::string Base64Encode(std::span<const std::uint8_t> data);
// Throws Error(kDecodeFailure) on malformed input. Whitespace is ignored.
Bytes Base64Decode(std::string_view text);

bool IsHexDigest(std::string_view text);

}  // namespace bannerforge

#endif  // BANNERFORGE_DIGEST_H_
