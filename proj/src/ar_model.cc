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
#include "sportscausal/ar_model.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include "Eigen/Core"
#include "Eigen/QR"
#include "absl/strings/str_cat.h"
#include "sportscausal/status.h"

namespace sportscausal {
namespace {

constexpr double kVarianceGuard = 1e-300;

// Regresses y_t on (1, y_{t-1}, ..., y_{t-order}) for t = first_row..end
// (0-based), first_row >= order.
absl::StatusOr<ArModel> FitOnRows(std::span<const double> series, int order,
                                  int first_row) {
  const int rows = static_cast<int>(series.size()) - first_row;
  const int cols = order + 1;
  if (rows < cols) {
    return NumericalError("DegenerateSeries",
                          absl::StrCat("order ", order, " needs at least ",
                                       cols, " regression rows, have ", rows));
  }
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd response(rows);
  for (int r = 0; r < rows; ++r) {
    const int t = first_row + r;
    design(r, 0) = 1.0;
    for (int j = 1; j <= order; ++j) design(r, j) = series[t - j];
    response(r) = series[t];
  }
  if (!design.allFinite() || !response.allFinite()) {
    return ValidationError("NonFiniteInput", "series has non-finite values");
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols) {
    return NumericalError(
        "DegenerateSeries",
        absl::StrCat("lag design of order ", order, " is rank deficient"));
  }
  const Eigen::VectorXd beta = qr.solve(response);
  double rss = (response - design * beta).squaredNorm();
  if (rss <= std::pow(1e-12 * response.norm(), 2)) rss = 0.0;

  ArModel model;
  model.order = order;
  model.intercept = beta(0);
  model.coefficients.assign(beta.data() + 1, beta.data() + cols);
  model.num_observations = rows;
  const int dof = std::max(rows - order - 1, 1);
  model.innovation_variance = std::max(rss / dof, 0.0);
  model.aic =
      rows * std::log(std::max(rss / rows, kVarianceGuard)) + 2.0 * (order + 1);
  return model;
}

}  // namespace

absl::StatusOr<ArModel> FitAr(std::span<const double> series, int order) {
  if (order < 0) return ValidationError("BadOrder", "AR order must be >= 0");
  if (static_cast<int>(series.size()) < order + 2) {
    return ValidationError("SeriesTooShort",
                           absl::StrCat("AR(", order, ") needs length >= ",
                                        order + 2, ", got ", series.size()));
  }
  return FitOnRows(series, order, order);
}

absl::StatusOr<ArModel> SelectArOrder(std::span<const double> series,
                                      int max_order) {
  if (max_order < 0)
    return ValidationError("BadOrder", "max order must be >= 0");
  if (static_cast<int>(series.size()) < max_order + 2) {
    return ValidationError("SeriesTooShort",
                           absl::StrCat("order selection up to ", max_order,
                                        " needs length >= ", max_order + 2,
                                        ", got ", series.size()));
  }
  std::optional<ArModel> best;
  absl::Status last_error = absl::OkStatus();
  for (int order = 0; order <= max_order; ++order) {
    auto fit = FitOnRows(series, order, max_order);
    if (!fit.ok()) {
      if (fit.status().code() != absl::StatusCode::kInternal)
        return fit.status();
      last_error = fit.status();
      continue;
    }
    if (!best.has_value() || fit->aic < best->aic) best = *std::move(fit);
  }
  if (!best.has_value()) return last_error;
  return *best;
}

double PredictNext(const ArModel& model, std::span<const double> history) {
  double value = model.intercept;
  const size_t n = history.size();
  for (int j = 0; j < model.order; ++j) {
    value += model.coefficients[j] * history[n - 1 - j];
  }
  return value;
}

absl::StatusOr<Forecast> ForecastAr(const ArModel& model,
                                    std::span<const double> history,
                                    int horizon) {
  if (horizon < 1) return ValidationError("BadHorizon", "horizon must be >= 1");
  if (static_cast<int>(history.size()) < model.order) {
    return ValidationError(
        "HistoryTooShort",
        absl::StrCat("AR(", model.order, ") needs ", model.order,
                     " history values, got ", history.size()));
  }
  std::vector<double> path(history.end() - model.order, history.end());
  Forecast forecast;
  forecast.mean.reserve(horizon);
  for (int h = 0; h < horizon; ++h) {
    const double next = PredictNext(model, path);
    forecast.mean.push_back(next);
    path.push_back(next);
  }

  std::vector<double> psi(horizon, 0.0);
  psi[0] = 1.0;
  for (int j = 1; j < horizon; ++j) {
    for (int i = 1; i <= std::min(j, model.order); ++i) {
      psi[j] += model.coefficients[i - 1] * psi[j - i];
    }
  }
  forecast.variance.resize(horizon);
  double cumulative = 0.0;
  for (int h = 0; h < horizon; ++h) {
    cumulative += psi[h] * psi[h];
    forecast.variance[h] = model.innovation_variance * cumulative;
  }
  return forecast;
}

}  // namespace sportscausal
