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
#ifndef SPORTSCAUSAL_PANEL_H_
#define SPORTSCAUSAL_PANEL_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace sportscausal {

// Subjects x time outcome matrix of an experiment together with the
// treatment indicator, subject-level features and the pre/post boundary.
//
// Columns 0..t0-1 are the pre-treatment period, t0..num_periods()-1 the post
// period. Treatment entries are 0 (control) or 1 (treated).
struct PanelData {
  Eigen::MatrixXd outcomes;
  std::vector<int> treatment;
  Eigen::MatrixXd features;  // num_units() x k, k may be 0.
  int t0 = 0;
  std::vector<std::string> unit_ids;
  std::vector<std::string> feature_names;

  int num_units() const { return static_cast<int>(outcomes.rows()); }
  int num_periods() const { return static_cast<int>(outcomes.cols()); }
  int num_post() const { return num_periods() - t0; }
  int num_features() const { return static_cast<int>(features.cols()); }
  int num_treated() const;
  int num_control() const { return num_units() - num_treated(); }
};

// Per-time group means of the control and treated subjects.
struct GroupSeries {
  std::vector<double> control;
  std::vector<double> treated;
  int t0 = 0;

  int num_post() const { return static_cast<int>(treated.size()) - t0; }
};

struct PeriodMeans {
  std::vector<double> pre;
  std::vector<double> post;
};

// Checks every PanelData invariant; errors are tagged validation errors.
absl::Status ValidatePanel(const PanelData& panel);

// Parses the long-format outcomes CSV (unit_id,t,y,d) and the optional
// features CSV (unit_id,x1..xk). Time labels are mapped to ranks; `t0` is a
// time label and the pre period holds every time point with label <= t0.
// Subjects keep their order of first appearance.
absl::StatusOr<PanelData> ParsePanel(
    std::string_view outcomes_csv, std::optional<std::string_view> features_csv,
    int t0);

// File-reading front end of ParsePanel.
absl::StatusOr<PanelData> LoadPanel(
    const std::string& outcomes_path,
    const std::optional<std::string>& features_path, int t0);

GroupSeries AggregateGroups(const PanelData& panel);

PeriodMeans SplitPeriods(const PanelData& panel);

// Row subset (with repetition allowed). Repeated subjects get a "#k" suffix
// so unit ids stay unique.
PanelData SelectUnits(const PanelData& panel, std::span<const int> rows);

// Inverse of ParsePanel, with time labels 1..num_periods().
std::string FormatOutcomesCsv(const PanelData& panel);
std::string FormatFeaturesCsv(const PanelData& panel);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_PANEL_H_
