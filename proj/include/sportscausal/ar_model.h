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
#ifndef SPORTSCAUSAL_AR_MODEL_H_
#define SPORTSCAUSAL_AR_MODEL_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace sportscausal {

// Point forecast and per-step forecast-error variance.
struct Forecast {
  std::vector<double> mean;
  std::vector<double> variance;
};

// y_t = intercept + sum_j coefficients[j] * y_{t-1-j} + e_t, Var(e_t) =
// innovation_variance.
struct ArModel {
  int order = 0;
  double intercept = 0.0;
  std::vector<double> coefficients;
  double innovation_variance = 0.0;
  double aic = 0.0;
  int num_observations = 0;  // regression rows used in the fit
};

// Conditional least squares over t = order+1..end. Errors: SeriesTooShort,
// DegenerateSeries (rank-deficient lag design).
absl::StatusOr<ArModel> FitAr(std::span<const double> series, int order);

// Minimum-AIC order in 0..max_order. Every candidate is fitted on the same
// rows t = max_order+1..end; rank-deficient candidates are skipped and ties
// go to the smaller order. The returned model is that common-sample fit.
absl::StatusOr<ArModel> SelectArOrder(std::span<const double> series,
                                      int max_order);

// Iterated h-step forecast from the end of `history`, with psi-weight
// variances sigma^2 * sum_{j<h} psi_j^2.
absl::StatusOr<Forecast> ForecastAr(const ArModel& model,
                                    std::span<const double> history,
                                    int horizon);

// One-step prediction given the last `order` values of `history`.
double PredictNext(const ArModel& model, std::span<const double> history);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_AR_MODEL_H_
