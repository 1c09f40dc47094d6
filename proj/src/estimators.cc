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
#include "sportscausal/estimators.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "sportscausal/parallel.h"
#include "sportscausal/random.h"
#include "sportscausal/status.h"

namespace sportscausal {
namespace {

constexpr std::uint64_t kBootstrapStream = 101;

struct Replicate {
  bool ok = false;
  double effect = 0.0;
  double p_value = 1.0;
};

template <typename Fn>
absl::StatusOr<BootstrapSummary> RunReplicates(const BootstrapOptions& options,
                                               Fn&& replicate_fn) {
  if (options.replicates < 1) {
    return ValidationError("BadReplicates", "B must be >= 1");
  }
  std::vector<Replicate> replicates(options.replicates);
  ParallelFor(options.replicates, options.workers,
              [&](int b) { replicates[b] = replicate_fn(b); });

  std::vector<double> effects;
  std::vector<double> p_values;
  for (const Replicate& r : replicates) {
    if (!r.ok) continue;
    effects.push_back(r.effect);
    p_values.push_back(r.p_value);
  }
  if (effects.empty()) {
    return NumericalError("AllReplicatesFailed",
                          absl::StrCat("all ", options.replicates,
                                       " bootstrap replicates failed"));
  }
  auto summary = AggregateReplicates(effects, p_values);
  if (!summary.ok()) return summary.status();
  summary->failed_replicates =
      options.replicates - static_cast<int>(effects.size());
  return summary;
}

// Replaces every control subject's post-period with its AR forecast.
struct ControlReplacement {
  PanelData panel;
  Forecast aggregate_forecast;
  ArModel aggregate_model;
  int fallback_subjects = 0;
};

absl::StatusOr<ControlReplacement> ReplaceControlPostPeriod(
    const PanelData& panel, int ar_max_order) {
  if (panel.t0 < ar_max_order + 2) {
    return ValidationError(
        "TooShortPrePeriod",
        absl::StrCat("t0=", panel.t0, " but AR order selection up to ",
                     ar_max_order, " needs t0 >= ", ar_max_order + 2));
  }
  const GroupSeries groups = AggregateGroups(panel);
  const std::span<const double> control_pre(groups.control.data(), panel.t0);
  auto selected = SelectArOrder(control_pre, ar_max_order);
  if (!selected.ok()) return selected.status();
  const int order = selected->order;
  auto aggregate = FitAr(control_pre, order);
  if (!aggregate.ok()) return aggregate.status();

  ControlReplacement out;
  out.panel = panel;
  out.aggregate_model = *aggregate;
  const int horizon = panel.num_post();
  const int controls = panel.num_control();
  out.aggregate_forecast.mean.assign(horizon, 0.0);
  out.aggregate_forecast.variance.assign(horizon, 0.0);
  std::vector<double> row(panel.t0);
  for (int i = 0; i < panel.num_units(); ++i) {
    if (panel.treatment[i] != 0) continue;
    for (int t = 0; t < panel.t0; ++t) row[t] = panel.outcomes(i, t);
    auto model = FitAr(row, order);
    if (!model.ok()) {
      if (model.status().code() != absl::StatusCode::kInternal) {
        return model.status();
      }
      // Aggregate dynamics re-centred on this subject's pre-period mean.
      ArModel fallback = *aggregate;
      const double mean =
          std::accumulate(row.begin(), row.end(), 0.0) / panel.t0;
      const double persistence = std::accumulate(
          fallback.coefficients.begin(), fallback.coefficients.end(), 0.0);
      fallback.intercept = mean * (1.0 - persistence);
      model = fallback;
      ++out.fallback_subjects;
    }
    auto forecast = ForecastAr(*model, row, horizon);
    if (!forecast.ok()) return forecast.status();
    for (int h = 0; h < horizon; ++h) {
      out.panel.outcomes(i, panel.t0 + h) = forecast->mean[h];
      out.aggregate_forecast.mean[h] += forecast->mean[h] / controls;
      out.aggregate_forecast.variance[h] +=
          forecast->variance[h] / (static_cast<double>(controls) * controls);
    }
  }
  return out;
}

}  // namespace

absl::StatusOr<EffectEstimate> Ancova(const PanelData& panel) {
  if (auto status = ValidatePanel(panel); !status.ok()) return status;
  const int units = panel.num_units();
  const int k = panel.num_features();
  if (units <= k + 3) {
    return ValidationError("TooFewRows",
                           absl::StrCat("ANCOVA with ", k, " features needs > ",
                                        k + 3, " subjects, got ", units));
  }
  const PeriodMeans means = SplitPeriods(panel);
  Eigen::MatrixXd design(units, 3 + k);
  Eigen::VectorXd response(units);
  for (int i = 0; i < units; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = means.pre[i];
    design(i, 2) = panel.treatment[i];
    for (int j = 0; j < k; ++j) design(i, 3 + j) = panel.features(i, j);
    response(i) = means.post[i];
  }
  auto ols = OlsFit(design, response);
  if (!ols.ok()) return ols.status();

  EffectEstimate estimate;
  estimate.method = Method::kAncova;
  estimate.effect = ols->coefficients(2);
  estimate.std_error = ols->std_errors(2);
  estimate.p_value = ols->p_values(2);
  const double half_width =
      StudentTQuantile(0.975, ols->dof) * estimate.std_error;
  estimate.ci_low = estimate.effect - half_width;
  estimate.ci_high = estimate.effect + half_width;
  return estimate;
}

absl::StatusOr<PanelData> ResampleAndMatch(const PanelData& panel,
                                           std::uint64_t seed, int replicate,
                                           double caliper_sd,
                                           bool match_on_pre_mean) {
  std::vector<int> controls;
  std::vector<int> treated;
  for (int i = 0; i < panel.num_units(); ++i) {
    (panel.treatment[i] == 1 ? treated : controls).push_back(i);
  }
  if (controls.empty() || treated.empty()) {
    return ValidationError("EmptyArm", "bootstrap needs both groups");
  }
  Rng rng =
      MakeRng(seed, kBootstrapStream, static_cast<std::uint64_t>(replicate));
  std::vector<int> rows;
  rows.reserve(panel.num_units());
  for (const auto* arm : {&controls, &treated}) {
    std::uniform_int_distribution<size_t> pick(0, arm->size() - 1);
    for (size_t k = 0; k < arm->size(); ++k) rows.push_back((*arm)[pick(rng)]);
  }
  const PanelData sample = SelectUnits(panel, rows);

  const int k = sample.num_features();
  Eigen::MatrixXd features(sample.num_units(), k + (match_on_pre_mean ? 1 : 0));
  features.leftCols(k) = sample.features;
  if (match_on_pre_mean) {
    features.col(k) = sample.outcomes.leftCols(sample.t0).rowwise().mean();
  }
  auto model = FitPropensity(features, sample.treatment);
  if (!model.ok()) return model.status();
  auto scores = ScoreAll(*model, features);
  if (!scores.ok()) return scores.status();
  auto matches = MatchNearest(*scores, sample.treatment, caliper_sd);
  if (!matches.ok()) return matches.status();
  if (matches->pairs.empty()) {
    return NumericalError("NoMatches", "no treated subject found a match");
  }
  std::vector<int> matched_rows;
  matched_rows.reserve(2 * matches->pairs.size());
  for (const auto& [t, c] : matches->pairs) {
    matched_rows.push_back(t);
    matched_rows.push_back(c);
  }
  return SelectUnits(sample, matched_rows);
}

absl::StatusOr<BootstrapSummary> BootstrapMatchingEstimate(
    const PanelData& panel, const BootstrapOptions& options) {
  if (auto status = ValidatePanel(panel); !status.ok()) return status;
  return RunReplicates(options, [&](int b) {
    Replicate out;
    auto matched = ResampleAndMatch(panel, options.seed, b, options.caliper_sd,
                                    options.match_on_pre_mean);
    if (!matched.ok()) return out;
    auto estimate = Ancova(*matched);
    if (!estimate.ok()) return out;
    out.ok = std::isfinite(estimate->effect);
    out.effect = estimate->effect;
    out.p_value = estimate->p_value;
    return out;
  });
}

absl::StatusOr<ImpactResult> CausalImpact(const GroupSeries& series,
                                          const StateSpaceSpec& spec) {
  const int periods = static_cast<int>(series.treated.size());
  if (series.control.size() != series.treated.size()) {
    return ValidationError("DimensionMismatch",
                           "treated and control series lengths differ");
  }
  const int min_pre = 5 + spec.seasonal_period.value_or(0);
  if (series.t0 < min_pre) {
    return ValidationError("TooShortPrePeriod",
                           absl::StrCat("impact estimation needs t0 >= ",
                                        min_pre, ", got ", series.t0));
  }
  const int horizon = periods - series.t0;
  if (horizon < 1) {
    return ValidationError("TooShortPostPeriod", "no post-period points");
  }
  const std::span<const double> y_pre(series.treated.data(), series.t0);
  const std::span<const double> x_pre(series.control.data(), series.t0);
  const std::span<const double> x_post(series.control.data() + series.t0,
                                       horizon);
  using OptSpan = std::optional<std::span<const double>>;
  auto fit = FitStateSpace(
      y_pre, spec.use_regression ? OptSpan(x_pre) : std::nullopt, spec);
  if (!fit.ok()) return fit.status();
  auto counterfactual = PredictCounterfactual(
      *fit, spec.use_regression ? OptSpan(x_post) : std::nullopt, horizon);
  if (!counterfactual.ok()) return counterfactual.status();

  ImpactResult result;
  result.fit = *std::move(fit);
  result.counterfactual = *std::move(counterfactual);
  result.pointwise_effects.resize(horizon);
  double variance_sum = 0.0;
  double counterfactual_sum = 0.0;
  for (int h = 0; h < horizon; ++h) {
    result.pointwise_effects[h] =
        series.treated[series.t0 + h] - result.counterfactual.mean[h];
    result.cumulative_effect += result.pointwise_effects[h];
    variance_sum += result.counterfactual.variance[h];
    counterfactual_sum += result.counterfactual.mean[h];
  }
  EffectEstimate& estimate = result.estimate;
  estimate.method = Method::kCausalImpact;
  estimate.effect = result.cumulative_effect / horizon;
  estimate.std_error = std::sqrt(variance_sum) / horizon;
  estimate.p_value =
      estimate.std_error > 0.0
          ? NormalTwoSidedPValue(estimate.effect / estimate.std_error)
          : (estimate.effect == 0.0 ? 1.0 : 0.0);
  const double half_width = NormalQuantile(0.975) * estimate.std_error;
  estimate.ci_low = estimate.effect - half_width;
  estimate.ci_high = estimate.effect + half_width;
  const double counterfactual_mean = counterfactual_sum / horizon;
  result.relative_effect = counterfactual_mean != 0.0
                               ? estimate.effect / counterfactual_mean
                               : std::numeric_limits<double>::quiet_NaN();
  return result;
}

absl::StatusOr<SportsResult> SportsCausal(const PanelData& panel,
                                          const SportsOptions& options) {
  if (auto status = ValidatePanel(panel); !status.ok()) return status;
  if (options.ar_max_order < 0) {
    return ValidationError("BadOrder", "ar_max_order must be >= 0");
  }
  auto replaced = ReplaceControlPostPeriod(panel, options.ar_max_order);
  if (!replaced.ok()) return replaced.status();

  SportsResult result;
  auto vanilla = CausalImpact(AggregateGroups(panel), options.spec);
  if (!vanilla.ok()) return vanilla.status();
  result.vanilla = *std::move(vanilla);
  result.corrected_series = AggregateGroups(replaced->panel);
  auto corrected = CausalImpact(result.corrected_series, options.spec);
  if (!corrected.ok()) return corrected.status();
  result.corrected = *std::move(corrected);
  result.vanilla.estimate.method = Method::kCausalImpact;
  result.corrected.estimate.method = Method::kSports;
  result.control_counterfactual = replaced->aggregate_forecast;
  result.aggregate_model = replaced->aggregate_model;
  result.fallback_subjects = replaced->fallback_subjects;

  if (options.bootstrap.replicates > 1) {
    const BootstrapOptions& boot = options.bootstrap;
    auto summary = RunReplicates(boot, [&](int b) {
      Replicate out;
      auto matched = ResampleAndMatch(panel, boot.seed, b, boot.caliper_sd,
                                      boot.match_on_pre_mean);
      if (!matched.ok()) return out;
      auto sample = ReplaceControlPostPeriod(*matched, options.ar_max_order);
      if (!sample.ok()) return out;
      auto impact = CausalImpact(AggregateGroups(sample->panel), options.spec);
      if (!impact.ok()) return out;
      out.ok = std::isfinite(impact->estimate.effect);
      out.effect = impact->estimate.effect;
      out.p_value = impact->estimate.p_value;
      return out;
    });
    if (!summary.ok()) return summary.status();
    result.bootstrap = *std::move(summary);
  }
  return result;
}

}  // namespace sportscausal
