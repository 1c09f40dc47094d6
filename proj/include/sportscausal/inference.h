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
#ifndef SPORTSCAUSAL_INFERENCE_H_
#define SPORTSCAUSAL_INFERENCE_H_

#include <span>
#include <string_view>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"

namespace sportscausal {

enum class Method { kAncova, kBootstrapMatching, kCausalImpact, kSports };

std::string_view MethodName(Method method);

// A treatment effect with a 95% two-sided interval.
struct EffectEstimate {
  double effect = 0.0;
  double std_error = 0.0;
  double p_value = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  Method method = Method::kAncova;
};

struct OlsResult {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd t_stats;
  Eigen::VectorXd p_values;
  Eigen::VectorXd residuals;
  double sigma2 = 0.0;  // RSS / (rows - columns)
  int dof = 0;
};

// Least squares through a column-pivoted QR factorization. Residual sums of
// squares at rounding level (below (1e-12 * |y|)^2) are treated as an exact
// fit, so exact data gives zero standard errors and zero p-values.
absl::StatusOr<OlsResult> OlsFit(const Eigen::MatrixXd& design,
                                 const Eigen::VectorXd& response);

// Benjamini-Hochberg step-up adjusted p-values, in input order.
absl::StatusOr<std::vector<double>> BhAdjust(std::span<const double> p_values);

// Bootstrap replicate collection and its headline summary.
struct BootstrapSummary {
  std::vector<double> replicate_effects;
  std::vector<double> replicate_pvalues;
  std::vector<double> q_values;
  double mean_effect = 0.0;
  double std_error = 0.0;  // s.d. of replicate effects (0 when B = 1)
  double median_q = 1.0;
  double ci_low = 0.0;   // 2.5% percentile of replicate effects
  double ci_high = 0.0;  // 97.5% percentile of replicate effects
  int num_replicates = 0;
  int failed_replicates = 0;
};

absl::StatusOr<BootstrapSummary> AggregateReplicates(
    std::span<const double> effects, std::span<const double> p_values);

// Headline estimate of a bootstrap run: mean replicate effect, median q-value
// and the percentile interval (widened to contain the mean if needed).
EffectEstimate SummaryEstimate(const BootstrapSummary& summary, Method method);

// Linear-interpolation sample quantile (R type 7); `values` need not be sorted.
double Quantile(std::span<const double> values, double prob);

double StudentTTwoSidedPValue(double t_stat, double dof);
double StudentTQuantile(double prob, double dof);
double NormalTwoSidedPValue(double z);
double NormalQuantile(double prob);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_INFERENCE_H_
