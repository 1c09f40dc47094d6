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
#ifndef SPORTSCAUSAL_TESTS_DENSE_GAUSSIAN_H_
#define SPORTSCAUSAL_TESTS_DENSE_GAUSSIAN_H_

#include <vector>

#include "sportscausal/state_space.h"

namespace sportscausal {

// Log-density of y - beta * x computed from the full n x n covariance of the
// structural model, in long double. Uses the same diffuse first-state prior
// as the filter.
long double DenseLogDensity(const StateSpaceSpec& spec, const StateVariances& v,
                            double beta, const std::vector<double>& y,
                            const std::vector<double>& x);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_TESTS_DENSE_GAUSSIAN_H_
