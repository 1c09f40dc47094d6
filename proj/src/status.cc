/*
* Copyright 2026 The SportsCausal Authors.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     https://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
* ============================================================================
*/
#include "sportscausal/status.h"

#include <string>

namespace sportscausal {

absl::Status IoError(std::string_view kind, std::string_view detail) {
  return absl::NotFoundError(std::string(kind) + ": " + std::string(detail));
}

absl::Status ValidationError(std::string_view kind, std::string_view detail) {
  return absl::InvalidArgumentError(std::string(kind) + ": " +
                                    std::string(detail));
}

absl::Status NumericalError(std::string_view kind, std::string_view detail) {
  return absl::InternalError(std::string(kind) + ": " + std::string(detail));
}

std::string ErrorKind(const absl::Status& status) {
  if (status.ok()) return "";
  const std::string message(status.message());
  const auto colon = message.find(':');
  if (colon != std::string::npos && colon > 0 &&
      message.substr(0, colon).find(' ') == std::string::npos) {
    return message.substr(0, colon);
  }
  return absl::StatusCodeToString(status.code());
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kPermissionDenied:
      return 1;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return 2;
    default:
      return 3;
  }
}

}  // namespace sportscausal
