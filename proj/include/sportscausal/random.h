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
#ifndef SPORTSCAUSAL_RANDOM_H_
#define SPORTSCAUSAL_RANDOM_H_

#include <cstdint>
#include <random>

namespace sportscausal {

using Rng = std::mt19937_64;

// Deterministic seed for sub-stream (stream, index, salt) of `seed`.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t index = 0, std::uint64_t salt = 0);

inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t index = 0, std::uint64_t salt = 0) {
  return Rng(DeriveSeed(seed, stream, index, salt));
}

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_RANDOM_H_
