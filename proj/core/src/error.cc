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

#include "bannerforge/error.h"

namespace bannerforge {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kParse: return "parse_error";
    case ErrorKind::kMissingField: return "missing_field";
    case ErrorKind::kDuplicateId: return "duplicate_id";
    case ErrorKind::kEmptyInput: return "empty_input";
    case ErrorKind::kInsufficientItems: return "insufficient_items";
    case ErrorKind::kInvalidTemplate: return "invalid_template";
    case ErrorKind::kEmptyOutput: return "empty_output";
    case ErrorKind::kTransport: return "transport_error";
    case ErrorKind::kBackendRejected: return "backend_rejected";
    case ErrorKind::kDecodeFailure: return "decode_failure";
    case ErrorKind::kIo: return "io_error";
    case ErrorKind::kDuplicateRecord: return "duplicate_record";
    case ErrorKind::kDegenerate: return "degenerate_input";
    case ErrorKind::kSingleSigned: return "single_signed";
    case ErrorKind::kMalformedModel: return "malformed_model";
    case ErrorKind::kInvalidRange: return "invalid_range";
    case ErrorKind::kMissingExtraction: return "missing_extraction";
    case ErrorKind::kEmptyLabel: return "empty_label";
    case ErrorKind::kMissingImage: return "missing_image";
    case ErrorKind::kUnknownTask: return "unknown_task";
    case ErrorKind::kInvalidRating: return "invalid_rating";
    case ErrorKind::kIncompleteGrid: return "incomplete_grid";
    case ErrorKind::kConfig: return "config_error";
  }
  return "unknown";
}

}  // namespace bannerforge
