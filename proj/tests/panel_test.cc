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
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "sportscausal/status.h"

namespace sportscausal {
namespace {

constexpr char kTwoByFour[] =
    "unit_id,t,y,d\n"
    "a,1,1,0\n"
    "a,2,2,0\n"
    "a,3,3,0\n"
    "a,4,4,0\n"
    "b,1,5,1\n"
    "b,2,6,1\n"
    "b,3,7,1\n"
    "b,4,8,1\n";

TEST(ParsePanelTest, MinimalWellFormedInput) {
  auto panel = ParsePanel(kTwoByFour, std::nullopt, 2);
  ASSERT_TRUE(panel.ok()) << panel.status();
  EXPECT_EQ(panel->num_units(), 2);
  EXPECT_EQ(panel->t0, 2);
  EXPECT_EQ(panel->num_post(), 2);
  EXPECT_EQ(panel->unit_ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(panel->treatment, (std::vector<int>{0, 1}));
  EXPECT_EQ(panel->num_features(), 0);
  EXPECT_DOUBLE_EQ(panel->outcomes(1, 3), 8.0);
}

TEST(ParsePanelTest, MissingCell) {
  const std::string csv =
      "unit_id,t,y,d\na,1,1,0\na,2,1,0\na,4,1,0\nb,1,1,1\nb,2,1,1\n"
      "b,3,1,1\nb,4,1,1\n";
  auto panel = ParsePanel(csv, std::nullopt, 2);
  ASSERT_FALSE(panel.ok());
  EXPECT_EQ(ErrorKind(panel.status()), "MissingCell");
  EXPECT_EQ(ExitCodeFor(panel.status()), 2);
}

TEST(ParsePanelTest, AllTreatedHasNoControl) {
  const std::string csv = "unit_id,t,y,d\na,1,1,1\na,2,1,1\nb,1,1,1\nb,2,1,1\n";
  auto panel = ParsePanel(csv, std::nullopt, 1);
  ASSERT_FALSE(panel.ok());
  EXPECT_EQ(ErrorKind(panel.status()), "EmptyArm");
  EXPECT_NE(panel.status().message().find("no control subjects"),
            std::string::npos);
}

TEST(ParsePanelTest, ErrorKinds) {
  struct Case {
    std::string csv;
    int t0;
    std::string kind;
  };
  const std::vector<Case> cases = {
      {"unit,t,y,d\na,1,1,0\n", 1, "BadHeader"},
      {"", 1, "BadHeader"},
      {"unit_id,t,y,d\na,1,1,0\na,1,2,0\nb,1,1,1\nb,2,1,1\na,2,1,0\n", 1,
       "DuplicateCell"},
      {"unit_id,t,y,d\na,1,1,0\na,2,1,1\nb,1,1,1\nb,2,1,1\n", 1,
       "InconsistentTreatment"},
      {"unit_id,t,y,d\na,1,1,0\na,2,1,0\nb,1,1,1\nb,2,1,1\n", 2, "BadT0"},
      {"unit_id,t,y,d\na,1,1,0\na,2,1,0\nb,1,1,1\nb,2,1,1\n", 0, "BadT0"},
      {"unit_id,t,y,d\na,1,x,0\na,2,1,0\nb,1,1,1\nb,2,1,1\n", 1, "BadValue"},
      {"unit_id,t,y,d\na,1,nan,0\na,2,1,0\nb,1,1,1\nb,2,1,1\n", 1, "BadValue"},
      {"unit_id,t,y,d\na,1,1,2\na,2,1,0\nb,1,1,1\nb,2,1,1\n", 1, "BadValue"},
      {"unit_id,t,y,d\na,0,1,0\na,2,1,0\nb,1,1,1\nb,2,1,1\n", 1, "BadValue"},
      {"unit_id,t,y,d\na,1,1\n", 1, "BadRecord"},
      {"unit_id,t,y,d\n", 1, "BadRecord"},
  };
  for (const Case& c : cases) {
    auto panel = ParsePanel(c.csv, std::nullopt, c.t0);
    ASSERT_FALSE(panel.ok()) << c.csv;
    EXPECT_EQ(ErrorKind(panel.status()), c.kind) << panel.status();
  }
}

TEST(ParsePanelTest, Features) {
  const std::string features = "unit_id,x1,x2\nb,0.5,1\na,-1,2\n";
  auto panel = ParsePanel(kTwoByFour, features, 2);
  ASSERT_TRUE(panel.ok()) << panel.status();
  ASSERT_EQ(panel->num_features(), 2);
  EXPECT_EQ(panel->feature_names, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_DOUBLE_EQ(panel->features(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(panel->features(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(panel->features(0, 1), 2.0);
}

TEST(ParsePanelTest, FeatureMismatch) {
  auto unknown =
      ParsePanel(kTwoByFour, std::string("unit_id,x1\na,1\nb,2\nc,3\n"), 2);
  ASSERT_FALSE(unknown.ok());
  EXPECT_EQ(ErrorKind(unknown.status()), "FeatureMismatch");
  auto missing = ParsePanel(kTwoByFour, std::string("unit_id,x1\na,1\n"), 2);
  ASSERT_FALSE(missing.ok());
  EXPECT_EQ(ErrorKind(missing.status()), "FeatureMismatch");
}

TEST(ParsePanelTest, TimeLabelsMapToRanks) {
  const std::string csv =
      "unit_id,t,y,d\na,10,1,0\na,20,2,0\na,35,3,0\nb,10,4,1\nb,20,5,1\n"
      "b,35,6,1\n";
  auto panel = ParsePanel(csv, std::nullopt, 20);
  ASSERT_TRUE(panel.ok()) << panel.status();
  EXPECT_EQ(panel->num_periods(), 3);
  EXPECT_EQ(panel->t0, 2);
  EXPECT_DOUBLE_EQ(panel->outcomes(1, 2), 6.0);
}

TEST(ParsePanelTest, RowOrderDoesNotMatterWithinSubjectOrder) {
  std::vector<std::string> rows = {"a,1,1,0", "a,2,2,0", "a,3,3,0", "a,4,4,0",
                                   "b,1,5,1", "b,2,6,1", "b,3,7,1", "b,4,8,1"};
  std::string reversed = "unit_id,t,y,d\n";
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) reversed += *it + "\n";
  auto a = ParsePanel(kTwoByFour, std::nullopt, 2);
  auto b = ParsePanel(reversed, std::nullopt, 2);
  ASSERT_TRUE(a.ok() && b.ok());
  // Subjects come in first-appearance order, so b lists "b" first.
  EXPECT_EQ(b->unit_ids, (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(a->outcomes.row(0), b->outcomes.row(1));
  EXPECT_EQ(a->outcomes.row(1), b->outcomes.row(0));
}

TEST(ParsePanelTest, IdenticalBytesGiveIdenticalPanels) {
  auto a = ParsePanel(kTwoByFour, std::nullopt, 2);
  auto b = ParsePanel(kTwoByFour, std::nullopt, 2);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->outcomes, b->outcomes);
  EXPECT_EQ(a->unit_ids, b->unit_ids);
}

TEST(ParsePanelTest, QuotedFieldsAndCrLf) {
  const std::string csv =
      "unit_id,t,y,d\r\n\"a,1\",1,1,0\r\n\"a,1\",2,2,0\r\nb,1,3,1\r\n"
      "b,2,4,1\r\n";
  auto panel = ParsePanel(csv, std::nullopt, 1);
  ASSERT_TRUE(panel.ok()) << panel.status();
  EXPECT_EQ(panel->unit_ids[0], "a,1");
}

TEST(LoadPanelTest, MissingFileIsIoError) {
  auto panel = LoadPanel("/nonexistent/panel.csv", std::nullopt, 1);
  ASSERT_FALSE(panel.ok());
  EXPECT_EQ(ExitCodeFor(panel.status()), 1);
}

PanelData MakePanel(const Eigen::MatrixXd& outcomes, std::vector<int> treatment,
                    int t0) {
  PanelData panel;
  panel.outcomes = outcomes;
  panel.treatment = std::move(treatment);
  panel.t0 = t0;
  panel.features.resize(outcomes.rows(), 0);
  for (int i = 0; i < outcomes.rows(); ++i) {
    panel.unit_ids.push_back("u" + std::to_string(i));
  }
  return panel;
}

TEST(AggregateGroupsTest, ArithmeticMean) {
  Eigen::MatrixXd y(3, 2);
  y << 1, 2, 3, 4, 5, 6;
  const GroupSeries series = AggregateGroups(MakePanel(y, {0, 0, 1}, 1));
  EXPECT_EQ(series.control, (std::vector<double>{2, 3}));
  EXPECT_EQ(series.treated, (std::vector<double>{5, 6}));
  EXPECT_EQ(series.t0, 1);
}

TEST(AggregateGroupsTest, SingleControlIsIdentity) {
  Eigen::MatrixXd y(2, 3);
  y << 1.5, -2, 7, 5, 6, 8;
  const GroupSeries series = AggregateGroups(MakePanel(y, {1, 0}, 1));
  EXPECT_EQ(series.control, (std::vector<double>{5, 6, 8}));
}

TEST(AggregateGroupsTest, MeanOfNoiseIsNearZero) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd y(101, 20);
  for (int i = 0; i < y.rows(); ++i) {
    for (int t = 0; t < y.cols(); ++t) y(i, t) = normal(rng);
  }
  std::vector<int> treatment(101, 0);
  treatment[100] = 1;
  const GroupSeries series = AggregateGroups(MakePanel(y, treatment, 10));
  for (double c : series.control) EXPECT_LT(std::fabs(c), 0.4);
}

TEST(SplitPeriodsTest, Arithmetic) {
  Eigen::MatrixXd y(2, 4);
  y << 1, 3, 5, 7, 4, 4, 4, 4;
  const PeriodMeans means = SplitPeriods(MakePanel(y, {0, 1}, 2));
  EXPECT_DOUBLE_EQ(means.pre[0], 2.0);
  EXPECT_DOUBLE_EQ(means.post[0], 6.0);
  EXPECT_DOUBLE_EQ(means.pre[1], 4.0);
  EXPECT_DOUBLE_EQ(means.post[1], 4.0);
}

TEST(SplitPeriodsTest, MatchesLoopRecomputationAndCommutesWithGrouping) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uniform(-10, 10);
  Eigen::MatrixXd y(9, 13);
  for (int i = 0; i < y.rows(); ++i) {
    for (int t = 0; t < y.cols(); ++t) y(i, t) = uniform(rng);
  }
  const std::vector<int> treatment = {0, 1, 0, 0, 1, 1, 0, 1, 0};
  const PanelData panel = MakePanel(y, treatment, 6);
  const PeriodMeans means = SplitPeriods(panel);
  for (int i = 0; i < 9; ++i) {
    double pre = 0.0, post = 0.0;
    for (int t = 0; t < 6; ++t) pre += y(i, t);
    for (int t = 6; t < 13; ++t) post += y(i, t);
    EXPECT_NEAR(means.pre[i], pre / 6, 1e-12);
    EXPECT_NEAR(means.post[i], post / 7, 1e-12);
  }
  const GroupSeries series = AggregateGroups(panel);
  double treated_pre = 0.0, group_of_split = 0.0;
  for (int t = 0; t < 6; ++t) treated_pre += series.treated[t] / 6;
  for (int i = 0; i < 9; ++i) {
    if (treatment[i] == 1) group_of_split += means.pre[i] / 4;
  }
  EXPECT_NEAR(treated_pre, group_of_split, 1e-10);
}

TEST(SelectUnitsTest, RepeatedRowsGetUniqueIds) {
  Eigen::MatrixXd y(2, 2);
  y << 1, 2, 3, 4;
  const std::vector<int> rows = {1, 1, 0};
  const PanelData out = SelectUnits(MakePanel(y, {0, 1}, 1), rows);
  EXPECT_EQ(out.num_units(), 3);
  EXPECT_TRUE(ValidatePanel(out).ok());
  EXPECT_EQ(out.treatment, (std::vector<int>{1, 1, 0}));
  EXPECT_DOUBLE_EQ(out.outcomes(2, 1), 2.0);
}

TEST(FormatCsvTest, RoundTrip) {
  Eigen::MatrixXd y(3, 3);
  y << 0.1, 1e-20, 3, 1.0 / 3, 5, -6, 7, 8.125, 9;
  PanelData panel = MakePanel(y, {0, 1, 0}, 2);
  panel.features.resize(3, 1);
  panel.features << 0.25, -1.0 / 7, 3;
  panel.feature_names = {"x1"};
  auto back = ParsePanel(FormatOutcomesCsv(panel), FormatFeaturesCsv(panel), 2);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->outcomes, panel.outcomes);
  EXPECT_EQ(back->features, panel.features);
  EXPECT_EQ(back->unit_ids, panel.unit_ids);
  EXPECT_EQ(back->treatment, panel.treatment);
}

TEST(ValidatePanelTest, RejectsBadShapes) {
  Eigen::MatrixXd y(2, 2);
  y << 1, 2, 3, 4;
  PanelData panel = MakePanel(y, {0, 1}, 1);
  panel.treatment.push_back(0);
  EXPECT_EQ(ErrorKind(ValidatePanel(panel)), "ShapeMismatch");
  panel = MakePanel(y, {0, 1}, 2);
  EXPECT_EQ(ErrorKind(ValidatePanel(panel)), "BadT0");
  panel = MakePanel(y, {0, 1}, 1);
  panel.unit_ids[1] = panel.unit_ids[0];
  EXPECT_EQ(ErrorKind(ValidatePanel(panel)), "DuplicateUnit");
  panel = MakePanel(y, {0, 1}, 1);
  panel.outcomes(0, 0) = std::nan("");
  EXPECT_EQ(ErrorKind(ValidatePanel(panel)), "NonFiniteInput");
}

}  // namespace
}  // namespace sportscausal
