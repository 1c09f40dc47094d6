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
#ifndef SPORTSCAUSAL_REPORT_H_
#define SPORTSCAUSAL_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sportscausal/ar_model.h"
#include "sportscausal/estimators.h"
#include "sportscausal/inference.h"
#include "sportscausal/panel.h"
#include "sportscausal/simulate.h"
#include "sportscausal/state_space.h"

namespace sportscausal {

using Json = nlohmann::json;

Json EstimateToJson(const EffectEstimate& estimate);
Json BootstrapToJson(const BootstrapSummary& summary);
Json ArModelToJson(const ArModel& model);
Json TruthToJson(const SimTruth& truth);

// Model settings, regression coefficient, variances and log-likelihood.
Json FitSummaryToJson(const StateSpaceFit& fit);

// FitSummaryToJson plus the filtered state trajectory and innovations.
Json FitToJson(const StateSpaceFit& fit);

Json ImpactToJson(const ImpactResult& impact);
Json SportsToJson(const SportsResult& result);

// Two-space indented dump with a trailing newline. Key order is sorted, so
// equal values always give equal bytes.
std::string DumpJson(const Json& value);

// Per-period table behind series.csv and the impact plot. Optional columns
// are empty for methods that do not produce them; counterfactual columns
// cover the post period only.
struct SeriesTable {
  int t0 = 0;
  std::vector<double> treated;
  std::vector<double> control;
  std::optional<std::vector<double>> predicted_control;
  std::optional<Forecast> counterfactual;
  std::optional<std::vector<double>> vanilla_counterfactual;
};

SeriesTable ObservedSeries(const GroupSeries& series);
SeriesTable ImpactSeries(const GroupSeries& series, const ImpactResult& impact);
SeriesTable SportsSeries(const GroupSeries& observed,
                         const SportsResult& result);

// Columns: t, treated, control, predicted_control, counterfactual,
// counterfactual_lower, counterfactual_upper, pointwise_effect,
// cumulative_effect, vanilla_counterfactual. Bands are 95% normal intervals.
std::string FormatSeriesCsv(const SeriesTable& table);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_REPORT_H_
