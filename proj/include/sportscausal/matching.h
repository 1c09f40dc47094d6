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
#ifndef SPORTSCAUSAL_MATCHING_H_
#define SPORTSCAUSAL_MATCHING_H_

#include <span>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"

namespace sportscausal {

inline constexpr int kMaxIrlsIterations = 100;
inline constexpr double kDefaultCaliperSd = 0.2;

// Logistic propensity model P(D = 1 | x) = sigmoid(intercept + weights . x).
struct PropensityModel {
  double intercept = 0.0;
  Eigen::VectorXd weights;
  bool converged = false;
  bool intercept_only = false;  // fitted with k = 0 features
  bool separated = false;       // stopped on detected (quasi-)separation
  int iterations = 0;
};

// Newton / IRLS fit. Stops when the score's infinity norm drops below 1e-8 or
// after kMaxIrlsIterations. When a fitted probability leaves
// [1e-10, 1 - 1e-10] while the coefficients keep growing, it stops early with
// converged = false and separated = true.
absl::StatusOr<PropensityModel> FitPropensity(const Eigen::MatrixXd& features,
                                              std::span<const int> treatment);

// sigmoid(intercept + weights . row) clamped to [1e-12, 1 - 1e-12].
absl::StatusOr<double> Score(const PropensityModel& model,
                             std::span<const double> row);

// Scores every row of `features`.
absl::StatusOr<std::vector<double>> ScoreAll(const PropensityModel& model,
                                             const Eigen::MatrixXd& features);

struct MatchSet {
  std::vector<std::pair<int, int>> pairs;  // (treated index, control index)
  std::vector<int> unmatched_treated;
  double caliper = 0.0;  // on the logit scale
  bool degenerate_scores = false;
};

// Greedy 1:1 nearest-neighbour matching on logit(score) without replacement.
// Treated units go in descending logit order (ties: smaller index first); the
// nearest unused control within caliper_sd x pooled s.d. of the logits is
// taken, distance ties going to the smaller control index.
absl::StatusOr<MatchSet> MatchNearest(std::span<const double> scores,
                                      std::span<const int> treatment,
                                      double caliper_sd = kDefaultCaliperSd);

double Logit(double p);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_MATCHING_H_
