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
#include "sportscausal/panel.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "sportscausal/status.h"
#include "sportscausal/text.h"

namespace sportscausal {
namespace {

// Non-empty, non-comment data lines with trailing '\r' removed.
std::vector<std::string_view> DataLines(std::string_view csv) {
  std::vector<std::string_view> lines;
  while (!csv.empty()) {
    const size_t end = csv.find('\n');
    std::string_view line = csv.substr(0, end);
    csv = end == std::string_view::npos ? std::string_view()
                                        : csv.substr(end + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

absl::StatusOr<double> ParseReal(const std::string& field, int line_no) {
  double value = 0.0;
  if (!absl::SimpleAtod(field, &value) || !std::isfinite(value)) {
    return ValidationError("BadValue",
                           absl::StrCat("line ", line_no, ": '", field,
                                        "' is not a finite decimal number"));
  }
  return value;
}

struct Cell {
  long long t;
  double y;
};

}  // namespace

int PanelData::num_treated() const {
  int count = 0;
  for (int d : treatment) count += d;
  return count;
}

absl::Status ValidatePanel(const PanelData& panel) {
  const int units = panel.num_units();
  if (panel.treatment.size() != static_cast<size_t>(units) ||
      panel.unit_ids.size() != static_cast<size_t>(units) ||
      panel.features.rows() != units) {
    return ValidationError("ShapeMismatch",
                           "outcomes, treatment, unit ids and features must "
                           "have one row per subject");
  }
  if (static_cast<int>(panel.feature_names.size()) != panel.num_features()) {
    return ValidationError("ShapeMismatch",
                           "feature name count differs from feature columns");
  }
  if (panel.t0 < 1 || panel.t0 >= panel.num_periods()) {
    return ValidationError(
        "BadT0", absl::StrCat("need at least one pre and one post period; t0=",
                              panel.t0, ", periods=", panel.num_periods()));
  }
  if (!panel.outcomes.allFinite() || !panel.features.allFinite()) {
    return ValidationError("NonFiniteInput",
                           "panel contains non-finite values");
  }
  for (int d : panel.treatment) {
    if (d != 0 && d != 1) {
      return ValidationError("BadValue", "treatment indicator must be 0 or 1");
    }
  }
  const int treated = panel.num_treated();
  if (treated == units) {
    return ValidationError("EmptyArm", "no control subjects");
  }
  if (treated == 0) {
    return ValidationError("EmptyArm", "no treated subjects");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : panel.unit_ids) {
    if (!seen.insert(id).second) {
      return ValidationError("DuplicateUnit", "unit id repeated: " + id);
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<PanelData> ParsePanel(
    std::string_view outcomes_csv, std::optional<std::string_view> features_csv,
    int t0) {
  const auto lines = DataLines(outcomes_csv);
  if (lines.empty()) {
    return ValidationError("BadHeader", "outcomes file is empty");
  }
  const auto header = SplitCsvLine(lines[0]);
  std::map<std::string, int> column;
  for (size_t i = 0; i < header.size(); ++i) {
    column[absl::AsciiStrToLower(header[i])] = static_cast<int>(i);
  }
  for (const char* name : {"unit_id", "t", "y", "d"}) {
    if (!column.contains(name)) {
      return ValidationError("BadHeader",
                             absl::StrCat("missing column '", name, "'"));
    }
  }
  const int unit_col = column["unit_id"];
  const int t_col = column["t"];
  const int y_col = column["y"];
  const int d_col = column["d"];

  std::vector<std::string> unit_ids;
  std::unordered_map<std::string, int> unit_index;
  std::vector<int> treatment;
  std::vector<std::vector<Cell>> cells;
  std::set<long long> times;

  for (size_t line_idx = 1; line_idx < lines.size(); ++line_idx) {
    const int line_no = static_cast<int>(line_idx) + 1;
    const auto fields = SplitCsvLine(lines[line_idx]);
    if (fields.size() != header.size()) {
      return ValidationError(
          "BadRecord",
          absl::StrCat("line ", line_no, ": expected ", header.size(),
                       " fields, got ", fields.size()));
    }
    const std::string& id = fields[unit_col];
    if (id.empty()) {
      return ValidationError("BadRecord",
                             absl::StrCat("line ", line_no, ": empty unit_id"));
    }
    long long t = 0;
    if (!absl::SimpleAtoi(fields[t_col], &t) || t < 1) {
      return ValidationError("BadValue", absl::StrCat("line ", line_no,
                                                      ": t must be an integer "
                                                      ">= 1, got '",
                                                      fields[t_col], "'"));
    }
    auto y = ParseReal(fields[y_col], line_no);
    if (!y.ok()) return y.status();
    int d = 0;
    if (!absl::SimpleAtoi(fields[d_col], &d) || (d != 0 && d != 1)) {
      return ValidationError(
          "BadValue",
          absl::StrCat("line ", line_no, ": d must be 0 or 1, got '",
                       fields[d_col], "'"));
    }
    auto [it, inserted] =
        unit_index.try_emplace(id, static_cast<int>(unit_ids.size()));
    if (inserted) {
      unit_ids.push_back(id);
      treatment.push_back(d);
      cells.emplace_back();
    } else if (treatment[it->second] != d) {
      return ValidationError("InconsistentTreatment",
                             "unit '" + id + "' appears with both d=0 and d=1");
    }
    cells[it->second].push_back({t, *y});
    times.insert(t);
  }
  if (unit_ids.empty()) {
    return ValidationError("BadRecord", "outcomes file has no data rows");
  }

  // Time labels -> ranks 0..P-1.
  std::unordered_map<long long, int> rank;
  for (long long t : times) rank.emplace(t, static_cast<int>(rank.size()));
  const int periods = static_cast<int>(times.size());

  if (t0 < *times.begin() || t0 >= *times.rbegin()) {
    return ValidationError(
        "BadT0", absl::StrCat("t0=", t0, " outside observed time range [",
                              *times.begin(), ", ", *times.rbegin(), ")"));
  }
  const int pre_periods =
      static_cast<int>(std::distance(times.begin(), times.upper_bound(t0)));

  PanelData panel;
  panel.outcomes.resize(static_cast<Eigen::Index>(unit_ids.size()), periods);
  for (size_t i = 0; i < unit_ids.size(); ++i) {
    std::vector<char> filled(periods, 0);
    for (const Cell& cell : cells[i]) {
      const int r = rank[cell.t];
      if (filled[r]) {
        return ValidationError(
            "DuplicateCell",
            absl::StrCat("unit '", unit_ids[i],
                         "' has more than one row at t=", cell.t));
      }
      filled[r] = 1;
      panel.outcomes(static_cast<Eigen::Index>(i), r) = cell.y;
    }
    for (long long t : times) {
      if (!filled[rank[t]]) {
        return ValidationError(
            "MissingCell",
            absl::StrCat("unit '", unit_ids[i], "' has no row at t=", t));
      }
    }
  }
  panel.treatment = std::move(treatment);
  panel.t0 = pre_periods;
  panel.unit_ids = std::move(unit_ids);
  panel.features.resize(panel.num_units(), 0);

  if (features_csv.has_value()) {
    const auto feature_lines = DataLines(*features_csv);
    if (feature_lines.empty()) {
      return ValidationError("BadHeader", "features file is empty");
    }
    const auto fheader = SplitCsvLine(feature_lines[0]);
    if (fheader.empty() || absl::AsciiStrToLower(fheader[0]) != "unit_id") {
      return ValidationError("BadHeader",
                             "features file must start with a unit_id column");
    }
    const int k = static_cast<int>(fheader.size()) - 1;
    panel.feature_names.assign(fheader.begin() + 1, fheader.end());
    panel.features.resize(panel.num_units(), k);
    std::vector<char> filled(panel.num_units(), 0);
    for (size_t line_idx = 1; line_idx < feature_lines.size(); ++line_idx) {
      const int line_no = static_cast<int>(line_idx) + 1;
      const auto fields = SplitCsvLine(feature_lines[line_idx]);
      if (fields.size() != fheader.size()) {
        return ValidationError(
            "BadRecord", absl::StrCat("features line ", line_no, ": expected ",
                                      fheader.size(), " fields"));
      }
      const auto it = unit_index.find(fields[0]);
      if (it == unit_index.end()) {
        return ValidationError(
            "FeatureMismatch",
            "features file has unit '" + fields[0] + "' absent from outcomes");
      }
      if (filled[it->second]) {
        return ValidationError(
            "DuplicateCell", "features repeated for unit '" + fields[0] + "'");
      }
      filled[it->second] = 1;
      for (int j = 0; j < k; ++j) {
        auto value = ParseReal(fields[j + 1], line_no);
        if (!value.ok()) return value.status();
        panel.features(it->second, j) = *value;
      }
    }
    for (int i = 0; i < panel.num_units(); ++i) {
      if (!filled[i]) {
        return ValidationError("FeatureMismatch", "no features for unit '" +
                                                      panel.unit_ids[i] + "'");
      }
    }
  }

  if (auto status = ValidatePanel(panel); !status.ok()) return status;
  return panel;
}

absl::StatusOr<PanelData> LoadPanel(
    const std::string& outcomes_path,
    const std::optional<std::string>& features_path, int t0) {
  auto outcomes = ReadFile(outcomes_path);
  if (!outcomes.ok()) return outcomes.status();
  if (!features_path.has_value())
    return ParsePanel(*outcomes, std::nullopt, t0);
  auto features = ReadFile(*features_path);
  if (!features.ok()) return features.status();
  return ParsePanel(*outcomes, std::string_view(*features), t0);
}

GroupSeries AggregateGroups(const PanelData& panel) {
  const int periods = panel.num_periods();
  GroupSeries series;
  series.t0 = panel.t0;
  series.control.assign(periods, 0.0);
  series.treated.assign(periods, 0.0);
  const int treated = panel.num_treated();
  const int control = panel.num_units() - treated;
  for (int i = 0; i < panel.num_units(); ++i) {
    auto& target = panel.treatment[i] == 1 ? series.treated : series.control;
    for (int t = 0; t < periods; ++t) target[t] += panel.outcomes(i, t);
  }
  for (int t = 0; t < periods; ++t) {
    series.control[t] /= control;
    series.treated[t] /= treated;
  }
  return series;
}

PeriodMeans SplitPeriods(const PanelData& panel) {
  PeriodMeans means;
  const int units = panel.num_units();
  means.pre.resize(units);
  means.post.resize(units);
  for (int i = 0; i < units; ++i) {
    means.pre[i] = panel.outcomes.row(i).head(panel.t0).mean();
    means.post[i] = panel.outcomes.row(i).tail(panel.num_post()).mean();
  }
  return means;
}

PanelData SelectUnits(const PanelData& panel, std::span<const int> rows) {
  PanelData subset;
  const auto n = static_cast<Eigen::Index>(rows.size());
  subset.outcomes.resize(n, panel.num_periods());
  subset.features.resize(n, panel.num_features());
  subset.treatment.resize(rows.size());
  subset.unit_ids.resize(rows.size());
  subset.feature_names = panel.feature_names;
  subset.t0 = panel.t0;
  std::vector<int> copies(panel.num_units(), 0);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int src = rows[r];
    subset.outcomes.row(r) = panel.outcomes.row(src);
    subset.features.row(r) = panel.features.row(src);
    subset.treatment[r] = panel.treatment[src];
    const int copy = copies[src]++;
    subset.unit_ids[r] = copy == 0
                             ? panel.unit_ids[src]
                             : absl::StrCat(panel.unit_ids[src], "#", copy);
  }
  return subset;
}

std::string FormatOutcomesCsv(const PanelData& panel) {
  std::string out = "unit_id,t,y,d\n";
  for (int i = 0; i < panel.num_units(); ++i) {
    for (int t = 0; t < panel.num_periods(); ++t) {
      absl::StrAppend(&out, panel.unit_ids[i], ",", t + 1, ",",
                      FormatDouble(panel.outcomes(i, t)), ",",
                      panel.treatment[i], "\n");
    }
  }
  return out;
}

std::string FormatFeaturesCsv(const PanelData& panel) {
  std::string out = "unit_id";
  for (const auto& name : panel.feature_names) absl::StrAppend(&out, ",", name);
  out += "\n";
  for (int i = 0; i < panel.num_units(); ++i) {
    out += panel.unit_ids[i];
    for (int j = 0; j < panel.num_features(); ++j) {
      absl::StrAppend(&out, ",", FormatDouble(panel.features(i, j)));
    }
    out += "\n";
  }
  return out;
}

}  // namespace sportscausal
