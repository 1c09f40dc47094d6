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
#include "sportscausal/matching.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "Eigen/Cholesky"
#include "Eigen/QR"
#include "absl/strings/str_cat.h"
#include "sportscausal/status.h"

namespace sportscausal {
namespace {

constexpr double kGradientTolerance = 1e-8;
constexpr double kStepTolerance = 1e-6;
constexpr double kSaturation = 1e-10;
constexpr double kScoreClamp = 1e-12;

double Sigmoid(double eta) {
  return eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta))
                    : std::exp(eta) / (1.0 + std::exp(eta));
}

// min(p, 1 - p) without cancellation.
double TailProbability(double eta) { return Sigmoid(-std::fabs(eta)); }

double SampleVariance(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); })) {
    return 0.0;
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

}  // namespace

double Logit(double p) { return std::log(p) - std::log1p(-p); }

absl::StatusOr<PropensityModel> FitPropensity(const Eigen::MatrixXd& features,
                                              std::span<const int> treatment) {
  const Eigen::Index n = features.rows();
  const Eigen::Index k = features.cols();
  if (static_cast<Eigen::Index>(treatment.size()) != n) {
    return ValidationError("DimensionMismatch",
                           "treatment length differs from feature rows");
  }
  int treated = 0;
  for (int d : treatment) treated += d;
  if (treated == 0 || treated == n) {
    return ValidationError("EmptyArm", "propensity fit needs both groups");
  }
  if (!features.allFinite()) {
    return ValidationError("NonFiniteInput", "features not finite");
  }

  Eigen::MatrixXd design(n, k + 1);
  design.col(0).setOnes();
  design.rightCols(k) = features;
  if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(design).rank() < k + 1) {
    return NumericalError("SingularDesign",
                          "propensity design matrix is rank deficient");
  }
  Eigen::VectorXd outcome(n);
  for (Eigen::Index i = 0; i < n; ++i) outcome(i) = treatment[i];

  const double share = static_cast<double>(treated) / static_cast<double>(n);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k + 1);
  beta(0) = Logit(share);

  PropensityModel model;
  model.intercept_only = (k == 0);
  Eigen::VectorXd prob(n);
  Eigen::VectorXd weight(n);
  for (int iter = 0; iter < kMaxIrlsIterations; ++iter) {
    const Eigen::VectorXd eta = design * beta;
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = Sigmoid(eta(i));
      weight(i) = prob(i) * (1.0 - prob(i));
    }
    const Eigen::VectorXd gradient = design.transpose() * (outcome - prob);
    const Eigen::MatrixXd hessian =
        design.transpose() * weight.asDiagonal() * design;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      model.separated = true;
      break;
    }
    const Eigen::VectorXd step = ldlt.solve(gradient);
    if (!step.allFinite()) {
      model.separated = true;
      break;
    }
    if (gradient.lpNorm<Eigen::Infinity>() < kGradientTolerance &&
        step.lpNorm<Eigen::Infinity>() <
            kStepTolerance * (1.0 + beta.lpNorm<Eigen::Infinity>())) {
      model.converged = true;
      model.iterations = iter;
      break;
    }
    const double previous_norm = beta.norm();
    beta += step;
    model.iterations = iter + 1;
    const Eigen::VectorXd next_eta = design * beta;
    bool saturated = false;
    for (Eigen::Index i = 0; i < n && !saturated; ++i) {
      saturated = TailProbability(next_eta(i)) < kSaturation;
    }
    if (saturated && beta.norm() > previous_norm) {
      model.separated = true;
      break;
    }
  }
  model.intercept = beta(0);
  model.weights = beta.tail(k);
  return model;
}

absl::StatusOr<double> Score(const PropensityModel& model,
                             std::span<const double> row) {
  if (static_cast<Eigen::Index>(row.size()) != model.weights.size()) {
    return ValidationError(
        "DimensionMismatch",
        absl::StrCat("row has ", row.size(), " features, model expects ",
                     model.weights.size()));
  }
  double eta = model.intercept;
  for (size_t j = 0; j < row.size(); ++j) eta += model.weights(j) * row[j];
  return std::clamp(Sigmoid(eta), kScoreClamp, 1.0 - kScoreClamp);
}

absl::StatusOr<std::vector<double>> ScoreAll(const PropensityModel& model,
                                             const Eigen::MatrixXd& features) {
  std::vector<double> scores(features.rows());
  std::vector<double> row(features.cols());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) row[j] = features(i, j);
    auto score = Score(model, row);
    if (!score.ok()) return score.status();
    scores[i] = *score;
  }
  return scores;
}

absl::StatusOr<MatchSet> MatchNearest(std::span<const double> scores,
                                      std::span<const int> treatment,
                                      double caliper_sd) {
  if (scores.size() != treatment.size()) {
    return ValidationError("DimensionMismatch",
                           "scores and treatment lengths differ");
  }
  if (!(caliper_sd > 0.0)) {
    return ValidationError("BadCaliper", "caliper_sd must be positive");
  }
  std::vector<int> treated;
  std::vector<int> controls;
  std::vector<double> logits(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] > 0.0 && scores[i] < 1.0)) {
      return ValidationError("BadValue", "scores must lie in (0, 1)");
    }
    logits[i] = Logit(scores[i]);
    (treatment[i] == 1 ? treated : controls).push_back(static_cast<int>(i));
  }
  if (treated.empty() || controls.empty()) {
    return ValidationError("EmptyArm", "matching needs both groups");
  }

  std::vector<double> treated_logits;
  std::vector<double> control_logits;
  for (int i : treated) treated_logits.push_back(logits[i]);
  for (int j : controls) control_logits.push_back(logits[j]);
  const double pooled_sd = std::sqrt(
      0.5 * (SampleVariance(treated_logits) + SampleVariance(control_logits)));

  MatchSet matches;
  matches.caliper = caliper_sd * pooled_sd;
  matches.degenerate_scores = !(pooled_sd > 0.0);

  std::stable_sort(treated.begin(), treated.end(),
                   [&](int a, int b) { return logits[a] > logits[b]; });
  std::vector<char> used(controls.size(), 0);
  for (int i : treated) {
    int best = -1;
    double best_distance = 0.0;
    for (size_t c = 0; c < controls.size(); ++c) {
      if (used[c]) continue;
      const double distance = std::fabs(logits[i] - logits[controls[c]]);
      if (best < 0 || distance < best_distance) {
        best = static_cast<int>(c);
        best_distance = distance;
      }
    }
    if (best >= 0 && best_distance <= matches.caliper) {
      used[best] = 1;
      matches.pairs.emplace_back(i, controls[best]);
    } else {
      matches.unmatched_treated.push_back(i);
    }
  }
  return matches;
}

}  // namespace sportscausal
