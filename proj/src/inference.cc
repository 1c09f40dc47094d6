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
#include "sportscausal/inference.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "Eigen/QR"
#include "absl/strings/str_cat.h"
#include "gsl/gsl_cdf.h"
#include "sportscausal/status.h"

namespace sportscausal {

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kAncova:
      return "ancova";
    case Method::kBootstrapMatching:
      return "bootstrap_matching";
    case Method::kCausalImpact:
      return "causal_impact";
    case Method::kSports:
      return "sports";
  }
  return "unknown";
}

double StudentTTwoSidedPValue(double t_stat, double dof) {
  if (std::isnan(t_stat)) return 1.0;
  if (std::isinf(t_stat)) return 0.0;
  return std::clamp(2.0 * gsl_cdf_tdist_Q(std::fabs(t_stat), dof), 0.0, 1.0);
}

double StudentTQuantile(double prob, double dof) {
  return gsl_cdf_tdist_Pinv(prob, dof);
}

double NormalTwoSidedPValue(double z) {
  if (std::isnan(z)) return 1.0;
  return std::clamp(std::erfc(std::fabs(z) / std::sqrt(2.0)), 0.0, 1.0);
}

double NormalQuantile(double prob) { return gsl_cdf_ugaussian_Pinv(prob); }

absl::StatusOr<OlsResult> OlsFit(const Eigen::MatrixXd& design,
                                 const Eigen::VectorXd& response) {
  const Eigen::Index rows = design.rows();
  const Eigen::Index cols = design.cols();
  if (response.size() != rows) {
    return ValidationError("DimensionMismatch",
                           "response length differs from design rows");
  }
  if (rows <= cols) {
    return ValidationError(
        "TooFewRows",
        absl::StrCat("need more rows than columns, got ", rows, "x", cols));
  }
  if (!design.allFinite() || !response.allFinite()) {
    return ValidationError("NonFiniteInput", "design or response not finite");
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols) {
    return NumericalError(
        "RankDeficient",
        absl::StrCat("design has rank ", qr.rank(), " < ", cols, " columns"));
  }

  OlsResult result;
  result.coefficients = qr.solve(response);
  result.residuals = response - design * result.coefficients;
  result.dof = static_cast<int>(rows - cols);
  const double rss = result.residuals.squaredNorm();
  const double exact_floor = std::pow(1e-12 * response.norm(), 2);
  result.sigma2 = rss <= exact_floor ? 0.0 : rss / result.dof;

  // (X'X)^-1 = P R^-1 R^-T P'.
  const Eigen::MatrixXd r =
      qr.matrixR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(cols, cols));
  const Eigen::MatrixXd cov_pivoted = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  const Eigen::MatrixXd xtx_inv = perm * cov_pivoted * perm.transpose();

  result.std_errors.resize(cols);
  result.t_stats.resize(cols);
  result.p_values.resize(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double se = std::sqrt(std::max(0.0, result.sigma2 * xtx_inv(j, j)));
    const double coef = result.coefficients(j);
    double t = 0.0;
    if (se > 0.0) {
      t = coef / se;
    } else if (coef != 0.0) {
      t = std::copysign(std::numeric_limits<double>::infinity(), coef);
    }
    result.std_errors(j) = se;
    result.t_stats(j) = t;
    result.p_values(j) = StudentTTwoSidedPValue(t, result.dof);
  }
  return result;
}

absl::StatusOr<std::vector<double>> BhAdjust(std::span<const double> p_values) {
  const size_t count = p_values.size();
  if (count == 0) return ValidationError("EmptyInput", "no p-values to adjust");
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      return ValidationError("BadValue",
                             absl::StrCat("p-value outside [0,1]: ", p));
    }
  }
  std::vector<size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return p_values[a] < p_values[b];
  });
  std::vector<double> q(count);
  double running_min = 1.0;
  for (size_t rank = count; rank-- > 0;) {
    const size_t idx = order[rank];
    const double scaled = p_values[idx] * (static_cast<double>(count) /
                                           static_cast<double>(rank + 1));
    running_min = std::min(running_min, scaled);
    q[idx] = std::min(running_min, 1.0);
  }
  return q;
}

double Quantile(std::span<const double> values, double prob) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

absl::StatusOr<BootstrapSummary> AggregateReplicates(
    std::span<const double> effects, std::span<const double> p_values) {
  if (effects.size() != p_values.size()) {
    return ValidationError("LengthMismatch",
                           absl::StrCat(effects.size(), " effects vs ",
                                        p_values.size(), " p-values"));
  }
  if (effects.empty()) {
    return ValidationError("EmptyInput", "no bootstrap replicates");
  }
  auto q = BhAdjust(p_values);
  if (!q.ok()) return q.status();

  BootstrapSummary summary;
  summary.replicate_effects.assign(effects.begin(), effects.end());
  summary.replicate_pvalues.assign(p_values.begin(), p_values.end());
  summary.q_values = *std::move(q);
  summary.num_replicates = static_cast<int>(effects.size());
  const double n = static_cast<double>(effects.size());
  summary.mean_effect =
      std::accumulate(effects.begin(), effects.end(), 0.0) / n;
  if (effects.size() > 1) {
    double ss = 0.0;
    for (double e : effects)
      ss += (e - summary.mean_effect) * (e - summary.mean_effect);
    summary.std_error = std::sqrt(ss / (n - 1.0));
  }
  summary.median_q = Quantile(summary.q_values, 0.5);
  summary.ci_low = Quantile(effects, 0.025);
  summary.ci_high = Quantile(effects, 0.975);
  return summary;
}

EffectEstimate SummaryEstimate(const BootstrapSummary& summary, Method method) {
  EffectEstimate estimate;
  estimate.method = method;
  estimate.effect = summary.mean_effect;
  estimate.std_error = summary.std_error;
  estimate.p_value = summary.median_q;
  estimate.ci_low = std::min(summary.ci_low, summary.mean_effect);
  estimate.ci_high = std::max(summary.ci_high, summary.mean_effect);
  return estimate;
}

}  // namespace sportscausal
