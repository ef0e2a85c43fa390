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

#ifndef BANNERFORGE_ERROR_H_
#define BANNERFORGE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace bannerforge {

enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kMissingField,
  kDuplicateId,
  kEmptyInput,
  kInsufficientItems,
  kInvalidTemplate,
  kEmptyOutput,
  kTransport,
  kBackendRejected,
  kDecodeFailure,
  kIo,
  kDuplicateRecord,
  kDegenerate,
  kSingleSigned,
  kMalformedModel,
  kInvalidRange,
  kMissingExtraction,
  kEmptyLabel,
  kMissingImage,
  kUnknownTask,
  kInvalidRating,
  kIncompleteGrid,
  kConfig,
};

std::string_view ErrorKindName(ErrorKind kind);

// Single exception type for the library. The kind drives retry decisions and
// CLI exit codes; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Transport failures are the only retryable kind.
  bool retryable() const noexcept { return kind_ == ErrorKind::kTransport; }

 private:
  ErrorKind kind_;
};

}  // namespace bannerforge

#endif  // BANNERFORGE_ERROR_H_
