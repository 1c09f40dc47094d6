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
#ifndef SPORTSCAUSAL_TEXT_H_
#define SPORTSCAUSAL_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace sportscausal {

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);

// Splits one CSV record. Fields may be double-quoted ("" escapes a quote);
// surrounding whitespace of unquoted fields is trimmed.
std::vector<std::string> SplitCsvLine(std::string_view line);

absl::StatusOr<std::string> ReadFile(const std::string& path);

// Writes through a temporary sibling file and renames it into place.
absl::Status WriteFileAtomic(const std::string& path, std::string_view data);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_TEXT_H_
