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
#ifndef SPORTSCAUSAL_STATE_SPACE_H_
#define SPORTSCAUSAL_STATE_SPACE_H_

#include <optional>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sportscausal/ar_model.h"

namespace sportscausal {

// Structural time-series model
//
//   y_t = mu_t + tau_t + beta * x_t + eps_t,       eps_t ~ N(0, observation)
//   mu_{t+1} = mu_t + nu_t + eta_t,                eta_t ~ N(0, level)
//   nu_{t+1} = nu_t + zeta_t (trend only),         zeta_t ~ N(0, slope)
//   tau_{t+1} = -sum_{j=1}^{S-1} tau_{t+1-j} + w_t, w_t ~ N(0, seasonal)
//
// State vector: [mu, (nu), tau_t, ..., tau_{t-S+2}].
enum class Trend { kLocalLevel, kLocalLinearTrend };

struct StateSpaceSpec {
  Trend trend = Trend::kLocalLevel;
  std::optional<int> seasonal_period;  // S >= 2 when present
  bool use_regression = true;

  int state_dim() const;
};

struct StateVariances {
  double observation = 0.0;
  double level = 0.0;
  double slope = 0.0;     // ignored for kLocalLevel
  double seasonal = 0.0;  // ignored without a seasonal component
};

struct StateSpaceFit {
  StateSpaceSpec spec;
  std::optional<double> beta;
  StateVariances variances;
  // Filtered (updated) state mean and covariance at every fitted time point.
  std::vector<Eigen::VectorXd> filtered_means;
  std::vector<Eigen::MatrixXd> filtered_covariances;
  std::vector<double> innovations;
  std::vector<double> innovation_variances;
  double loglik = 0.0;
  double prior_variance = 0.0;
};

absl::Status ValidateSpec(const StateSpaceSpec& spec);

// Initial state covariance multiplier: 1e6 x the sample variance of `y`
// (1e6 x max(mean^2, 1) when `y` is constant).
double DiffusePriorVariance(std::span<const double> y);

// Gaussian log-likelihood of y (after removing beta * x) through the Kalman
// prediction-error decomposition. The initial state has mean
// [y_0 - beta * x_0, 0, ...] and covariance DiffusePriorVariance(y) * I.
absl::StatusOr<double> KalmanLogLik(const StateSpaceSpec& spec,
                                    const StateVariances& variances,
                                    std::optional<double> beta,
                                    std::span<const double> y,
                                    std::optional<std::span<const double>> x);

// Runs the filter for fixed parameters and returns the full fit record.
absl::StatusOr<StateSpaceFit> FilterStateSpace(
    const StateSpaceSpec& spec, const StateVariances& variances,
    std::optional<double> beta, std::span<const double> y,
    std::optional<std::span<const double>> x);

// Maximum likelihood over the log-variances (Nelder-Mead, five fixed starts);
// beta is profiled out exactly for every variance setting.
absl::StatusOr<StateSpaceFit> FitStateSpace(
    std::span<const double> y_pre, std::optional<std::span<const double>> x_pre,
    const StateSpaceSpec& spec);

// Propagates the last filtered state forward without measurement updates.
absl::StatusOr<Forecast> PredictCounterfactual(
    const StateSpaceFit& fit, std::optional<std::span<const double>> x_post,
    int horizon);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_STATE_SPACE_H_
