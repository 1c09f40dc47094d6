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
#include "sportscausal/report.h"

#include <cmath>

#include "sportscausal/text.h"

namespace sportscausal {
namespace {

constexpr double kZ95 = 1.959963984540054;

Json VectorToJson(const Eigen::VectorXd& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Json MatrixToJson(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(VectorToJson(m.row(r).transpose()));
  }
  return rows;
}

std::string Cell(std::optional<double> value) {
  return value ? FormatDouble(*value) : "";
}

}  // namespace

Json EstimateToJson(const EffectEstimate& estimate) {
  return {{"method", std::string(MethodName(estimate.method))},
          {"effect", estimate.effect},
          {"std_error", estimate.std_error},
          {"p_value", estimate.p_value},
          {"ci_low", estimate.ci_low},
          {"ci_high", estimate.ci_high}};
}

Json BootstrapToJson(const BootstrapSummary& summary) {
  return {{"num_replicates", summary.num_replicates},
          {"failed_replicates", summary.failed_replicates},
          {"mean_effect", summary.mean_effect},
          {"std_error", summary.std_error},
          {"median_q", summary.median_q},
          {"ci_low", summary.ci_low},
          {"ci_high", summary.ci_high},
          {"replicate_effects", summary.replicate_effects},
          {"replicate_pvalues", summary.replicate_pvalues},
          {"q_values", summary.q_values}};
}

Json ArModelToJson(const ArModel& model) {
  return {{"order", model.order},
          {"intercept", model.intercept},
          {"coefficients", model.coefficients},
          {"innovation_variance", model.innovation_variance},
          {"aic", model.aic},
          {"num_observations", model.num_observations}};
}

Json TruthToJson(const SimTruth& truth) {
  return {{"direct_effect", truth.direct_effect},
          {"spillover_effect", truth.spillover_effect},
          {"t0", truth.t0},
          {"m", truth.m},
          {"n", truth.n}};
}

Json FitSummaryToJson(const StateSpaceFit& fit) {
  Json out = {
      {"trend", fit.spec.trend == Trend::kLocalLevel ? "local_level"
                                                     : "local_linear_trend"},
      {"seasonal_period", nullptr},
      {"regression", fit.spec.use_regression},
      {"beta", nullptr},
      {"loglik", fit.loglik},
      {"variances",
       {{"observation", fit.variances.observation},
        {"level", fit.variances.level},
        {"slope", fit.variances.slope},
        {"seasonal", fit.variances.seasonal}}}};
  if (fit.spec.seasonal_period)
    out["seasonal_period"] = *fit.spec.seasonal_period;
  if (fit.beta) out["beta"] = *fit.beta;
  return out;
}

Json FitToJson(const StateSpaceFit& fit) {
  Json out = FitSummaryToJson(fit);
  out["prior_variance"] = fit.prior_variance;
  out["innovations"] = fit.innovations;
  out["innovation_variances"] = fit.innovation_variances;
  Json means = Json::array();
  for (const auto& m : fit.filtered_means) means.push_back(VectorToJson(m));
  Json covariances = Json::array();
  for (const auto& p : fit.filtered_covariances) {
    covariances.push_back(MatrixToJson(p));
  }
  out["filtered_means"] = std::move(means);
  out["filtered_covariances"] = std::move(covariances);
  return out;
}

Json ImpactToJson(const ImpactResult& impact) {
  return {{"estimate", EstimateToJson(impact.estimate)},
          {"cumulative_effect", impact.cumulative_effect},
          {"relative_effect", impact.relative_effect},
          {"relative_effect_percent", 100.0 * impact.relative_effect},
          {"pointwise_effects", impact.pointwise_effects},
          {"counterfactual_mean", impact.counterfactual.mean},
          {"counterfactual_variance", impact.counterfactual.variance},
          {"model", FitSummaryToJson(impact.fit)}};
}

Json SportsToJson(const SportsResult& result) {
  Json out = {
      {"vanilla", ImpactToJson(result.vanilla)},
      {"corrected", ImpactToJson(result.corrected)},
      {"indirect_effect",
       result.vanilla.estimate.effect - result.corrected.estimate.effect},
      {"aggregate_model", ArModelToJson(result.aggregate_model)},
      {"fallback_subjects", result.fallback_subjects},
      {"predicted_control_mean", result.control_counterfactual.mean},
      {"predicted_control_variance", result.control_counterfactual.variance},
      {"bootstrap", nullptr}};
  if (result.bootstrap) {
    out["bootstrap"] = BootstrapToJson(*result.bootstrap);
    out["estimate"] =
        EstimateToJson(SummaryEstimate(*result.bootstrap, Method::kSports));
  } else {
    out["estimate"] = EstimateToJson(result.corrected.estimate);
  }
  return out;
}

std::string DumpJson(const Json& value) { return value.dump(2) + "\n"; }

SeriesTable ObservedSeries(const GroupSeries& series) {
  SeriesTable table;
  table.t0 = series.t0;
  table.treated = series.treated;
  table.control = series.control;
  return table;
}

SeriesTable ImpactSeries(const GroupSeries& series,
                         const ImpactResult& impact) {
  SeriesTable table = ObservedSeries(series);
  table.counterfactual = impact.counterfactual;
  return table;
}

SeriesTable SportsSeries(const GroupSeries& observed,
                         const SportsResult& result) {
  SeriesTable table = ImpactSeries(observed, result.corrected);
  table.predicted_control = result.corrected_series.control;
  table.vanilla_counterfactual = result.vanilla.counterfactual.mean;
  return table;
}

std::string FormatSeriesCsv(const SeriesTable& table) {
  std::string out =
      "t,treated,control,predicted_control,counterfactual,"
      "counterfactual_lower,counterfactual_upper,pointwise_effect,"
      "cumulative_effect,vanilla_counterfactual\n";
  double cumulative = 0.0;
  for (size_t t = 0; t < table.treated.size(); ++t) {
    const int h = static_cast<int>(t) - table.t0;
    std::optional<double> predicted, mean, lower, upper, pointwise, total,
        vanilla;
    if (table.predicted_control) predicted = (*table.predicted_control)[t];
    if (h >= 0 && table.counterfactual &&
        h < static_cast<int>(table.counterfactual->mean.size())) {
      const double m = table.counterfactual->mean[h];
      const double sd = std::sqrt(table.counterfactual->variance[h]);
      mean = m;
      lower = m - kZ95 * sd;
      upper = m + kZ95 * sd;
      pointwise = table.treated[t] - m;
      cumulative += *pointwise;
      total = cumulative;
    }
    if (h >= 0 && table.vanilla_counterfactual &&
        h < static_cast<int>(table.vanilla_counterfactual->size())) {
      vanilla = (*table.vanilla_counterfactual)[h];
    }
    out += std::to_string(t + 1) + "," + FormatDouble(table.treated[t]) + "," +
           FormatDouble(table.control[t]) + "," + Cell(predicted) + "," +
           Cell(mean) + "," + Cell(lower) + "," + Cell(upper) + "," +
           Cell(pointwise) + "," + Cell(total) + "," + Cell(vanilla) + "\n";
  }
  return out;
}

}  // namespace sportscausal
