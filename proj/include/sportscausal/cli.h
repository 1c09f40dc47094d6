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
#ifndef SPORTSCAUSAL_CLI_H_
#define SPORTSCAUSAL_CLI_H_

#include <string>
#include <vector>

namespace sportscausal {

// Default output directory when --out is not given.
inline constexpr char kOutputDirEnv[] = "SPORTSCAUSAL_OUT";
inline constexpr char kDefaultOutputDir[] = "sportscausal_out";

// Entry point of the `sportscausal` tool. Returns the process exit code:
// 0 ok, 1 IO failure, 2 invalid input or config, 3 numerical failure.
int RunMain(int argc, char** argv);

// Same, with args[0] the program name.
int RunMain(const std::vector<std::string>& args);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_CLI_H_
