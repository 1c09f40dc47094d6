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
#ifndef SPORTSCAUSAL_ESTIMATORS_H_
#define SPORTSCAUSAL_ESTIMATORS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "sportscausal/ar_model.h"
#include "sportscausal/inference.h"
#include "sportscausal/matching.h"
#include "sportscausal/panel.h"
#include "sportscausal/state_space.h"

namespace sportscausal {

inline constexpr int kDefaultBootstrapReplicates = 200;
inline constexpr int kDefaultArMaxOrder = 3;

struct BootstrapOptions {
  int replicates = kDefaultBootstrapReplicates;
  std::uint64_t seed = 1;
  double caliper_sd = kDefaultCaliperSd;
  // Appends each subject's pre-period mean outcome to the propensity features.
  bool match_on_pre_mean = true;
  int workers = 1;
};

// Counterfactual impact of the treatment on the treated group series.
struct ImpactResult {
  EffectEstimate estimate;  // mean pointwise post-period effect
  double cumulative_effect = 0.0;
  Forecast counterfactual;
  double relative_effect = 0.0;  // effect / mean counterfactual
  std::vector<double> pointwise_effects;
  StateSpaceFit fit;
};

struct SportsResult {
  ImpactResult vanilla;    // observed control as regressor
  ImpactResult corrected;  // control replaced by its spillover-free forecast
  Forecast control_counterfactual;
  GroupSeries corrected_series;
  std::optional<BootstrapSummary> bootstrap;
  ArModel aggregate_model;    // order selected on the aggregated control
  int fallback_subjects = 0;  // control subjects using the aggregate model
};

struct SportsOptions {
  StateSpaceSpec spec;
  int ar_max_order = kDefaultArMaxOrder;
  // replicates <= 1 runs once on the full panel without matching.
  BootstrapOptions bootstrap;
};

// OLS of post-period mean on (1, pre-period mean, D, X); reports the D term.
absl::StatusOr<EffectEstimate> Ancova(const PanelData& panel);

// Stratified subject bootstrap, propensity matching and ANCOVA per replicate.
// Replicate b draws from a stream derived from (seed, b) only.
absl::StatusOr<BootstrapSummary> BootstrapMatchingEstimate(
    const PanelData& panel, const BootstrapOptions& options);

absl::StatusOr<ImpactResult> CausalImpact(const GroupSeries& series,
                                          const StateSpaceSpec& spec);

absl::StatusOr<SportsResult> SportsCausal(const PanelData& panel,
                                          const SportsOptions& options);

// One bootstrap draw: stratified resample of subjects followed by propensity
// matching; returns the matched sample (treated/control pairs).
absl::StatusOr<PanelData> ResampleAndMatch(const PanelData& panel,
                                           std::uint64_t seed, int replicate,
                                           double caliper_sd,
                                           bool match_on_pre_mean);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_ESTIMATORS_H_
