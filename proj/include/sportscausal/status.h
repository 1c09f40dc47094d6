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
#ifndef SPORTSCAUSAL_STATUS_H_
#define SPORTSCAUSAL_STATUS_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"

namespace sportscausal {

// Every error produced by the library carries a stable kind tag as the
// message prefix ("Kind: detail"). The absl code encodes the category:
//   kNotFound / kUnavailable                       -> I/O
//   kInvalidArgument / kFailedPrecondition         -> validation
//   kInternal                                      -> numerical failure
absl::Status IoError(std::string_view kind, std::string_view detail);
absl::Status ValidationError(std::string_view kind, std::string_view detail);
absl::Status NumericalError(std::string_view kind, std::string_view detail);

// Returns the kind tag of a non-OK status ("MissingCell", ...), or the
// canonical code name when the message carries no tag.
std::string ErrorKind(const absl::Status& status);

// CLI exit code for a status: 0 ok, 1 I/O, 2 validation, 3 numerical.
int ExitCodeFor(const absl::Status& status);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_STATUS_H_
