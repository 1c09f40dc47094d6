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

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "sportscausal/status.h"

namespace sportscausal {
namespace {

std::vector<double> SimulateAr(const std::vector<double>& phi, double c,
                               double sd, int length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sd);
  const int p = static_cast<int>(phi.size());
  std::vector<double> y(length + 200, 0.0);
  for (size_t t = p; t < y.size(); ++t) {
    double v = c + normal(rng);
    for (int j = 0; j < p; ++j) v += phi[j] * y[t - 1 - j];
    y[t] = v;
  }
  return std::vector<double>(y.end() - length, y.end());
}

std::vector<double> Residuals(const ArModel& model,
                              const std::vector<double>& y) {
  std::vector<double> r;
  for (size_t t = model.order; t < y.size(); ++t) {
    double fit = model.intercept;
    for (int j = 0; j < model.order; ++j) {
      fit += model.coefficients[j] * y[t - 1 - j];
    }
    r.push_back(y[t] - fit);
  }
  return r;
}

TEST(FitArTest, ExactGeometricRecursion) {
  const std::vector<double> y = {1, 0.5, 0.25, 0.125, 0.0625};
  auto model = FitAr(y, 1);
  ASSERT_TRUE(model.ok()) << model.status();
  EXPECT_EQ(model->order, 1);
  EXPECT_NEAR(model->intercept, 0.0, 1e-12);
  EXPECT_NEAR(model->coefficients[0], 0.5, 1e-12);
  EXPECT_NEAR(model->innovation_variance, 0.0, 1e-20);
  EXPECT_EQ(model->num_observations, 4);
}

TEST(FitArTest, ConstantSeriesIsDegenerate) {
  const std::vector<double> y = {7, 7, 7, 7};
  auto model = FitAr(y, 1);
  ASSERT_FALSE(model.ok());
  EXPECT_EQ(ErrorKind(model.status()), "DegenerateSeries");
}

TEST(FitArTest, TooShort) {
  const std::vector<double> y = {1, 2, 3};
  EXPECT_EQ(ErrorKind(FitAr(y, 2).status()), "SeriesTooShort");
  EXPECT_EQ(ErrorKind(FitAr(y, -1).status()), "BadOrder");
}

TEST(FitArTest, RecoversAr1Coefficient) {
  const auto y = SimulateAr({0.8}, 0.0, 1.0, 5000, 17);
  auto model = FitAr(y, 1);
  ASSERT_TRUE(model.ok());
  EXPECT_LT(std::fabs(model->coefficients[0] - 0.8), 0.05);
  EXPECT_NEAR(model->innovation_variance, 1.0, 0.1);
}

TEST(FitArTest, NormalEquationsVarianceAndAic) {
  const auto y = SimulateAr({0.5, -0.3}, 2.0, 1.5, 300, 3);
  auto model = FitAr(y, 2);
  ASSERT_TRUE(model.ok());
  const auto r = Residuals(*model, y);
  double s0 = 0, s1 = 0, s2 = 0, rss = 0;
  for (size_t k = 0; k < r.size(); ++k) {
    s0 += r[k];
    s1 += r[k] * y[k + 1];
    s2 += r[k] * y[k];
    rss += r[k] * r[k];
  }
  double norm = 0;
  for (double v : y) norm += v * v;
  norm = std::sqrt(norm);
  EXPECT_LT(std::fabs(s0), 1e-8 * norm);
  EXPECT_LT(std::fabs(s1), 1e-8 * norm);
  EXPECT_LT(std::fabs(s2), 1e-8 * norm);
  const double n = static_cast<double>(r.size());
  EXPECT_NEAR(model->innovation_variance, rss / (n - 3), 1e-10);
  EXPECT_NEAR(model->aic, n * std::log(rss / n) + 2 * 3, 1e-8);
}

TEST(FitArTest, ScaleEquivariance) {
  const auto y = SimulateAr({0.6}, 1.0, 1.0, 200, 9);
  std::vector<double> scaled = y;
  for (double& v : scaled) v *= -3.0;
  auto a = FitAr(y, 2);
  auto b = FitAr(scaled, 2);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_NEAR(b->intercept, -3.0 * a->intercept, 1e-9);
  EXPECT_NEAR(std::sqrt(b->innovation_variance),
              3.0 * std::sqrt(a->innovation_variance), 1e-9);
  for (int j = 0; j < 2; ++j) {
    EXPECT_NEAR(b->coefficients[j], a->coefficients[j], 1e-10);
  }
}

// Plain AIC over orders 0..5 keeps order 0 on white noise with asymptotic
// probability about 0.74 (0.7365 over 2000 independent numpy runs).
TEST(SelectArOrderTest, WhiteNoisePicksOrderZeroAtAicRate) {
  int zero = 0;
  for (int seed = 0; seed < 50; ++seed) {
    const auto y = SimulateAr({}, 0.0, 1.0, 500, 1000 + seed);
    auto model = SelectArOrder(y, 5);
    ASSERT_TRUE(model.ok());
    zero += model->order == 0;
  }
  EXPECT_GE(zero, 29);
  EXPECT_LE(zero, 45);
}

TEST(SelectArOrderTest, GeometricSeriesPicksOrderOne) {
  const std::vector<double> y = {1,      0.5,     0.25,    0.125,
                                 0.0625, 0.03125, 0.015625};
  auto model = SelectArOrder(y, 3);
  ASSERT_TRUE(model.ok()) << model.status();
  EXPECT_EQ(model->order, 1);
}

TEST(SelectArOrderTest, MaxOrderZeroIsInterceptOnly) {
  const std::vector<double> y = {1, 4, 2, 5, 3};
  auto model = SelectArOrder(y, 0);
  ASSERT_TRUE(model.ok());
  EXPECT_EQ(model->order, 0);
  EXPECT_NEAR(model->intercept, 3.0, 1e-12);
  EXPECT_NEAR(model->innovation_variance, 2.5, 1e-12);
}

TEST(SelectArOrderTest, ArgminOverCommonSample) {
  for (int seed = 0; seed < 20; ++seed) {
    const auto y = SimulateAr({0.4, 0.3}, 0.0, 1.0, 80, 50 + seed);
    const int max_order = 4;
    auto selected = SelectArOrder(y, max_order);
    ASSERT_TRUE(selected.ok());
    for (int p = 0; p <= max_order; ++p) {
      // Dropping max_order - p leading values aligns rows with the common
      // sample.
      const std::vector<double> tail(y.begin() + (max_order - p), y.end());
      auto candidate = FitAr(tail, p);
      ASSERT_TRUE(candidate.ok());
      EXPECT_LE(selected->aic, candidate->aic + 1e-9);
      if (p == selected->order) {
        EXPECT_NEAR(selected->aic, candidate->aic, 1e-9);
      }
    }
  }
}

TEST(ForecastArTest, Recursion) {
  ArModel model;
  model.order = 1;
  model.coefficients = {0.5};
  model.innovation_variance = 0.0;
  const std::vector<double> history = {3.0, 1.0};
  auto forecast = ForecastAr(model, history, 3);
  ASSERT_TRUE(forecast.ok());
  EXPECT_EQ(forecast->mean, (std::vector<double>{0.5, 0.25, 0.125}));
  EXPECT_EQ(forecast->variance, (std::vector<double>{0, 0, 0}));
}

TEST(ForecastArTest, Ar1ClosedFormVariance) {
  ArModel model;
  model.order = 1;
  model.intercept = 1.0;
  model.coefficients = {0.7};
  model.innovation_variance = 2.0;
  const std::vector<double> history = {5.0};
  auto forecast = ForecastAr(model, history, 6);
  ASSERT_TRUE(forecast.ok());
  for (int h = 1; h <= 6; ++h) {
    const double var = 2.0 * (1 - std::pow(0.49, h)) / (1 - 0.49);
    const double mean =
        1.0 * (1 - std::pow(0.7, h)) / 0.3 + std::pow(0.7, h) * 5.0;
    EXPECT_NEAR(forecast->variance[h - 1], var, 1e-12);
    EXPECT_NEAR(forecast->mean[h - 1], mean, 1e-12);
  }
}

TEST(ForecastArTest, VarianceMatchesMonteCarlo) {
  ArModel model;
  model.order = 2;
  model.intercept = 0.5;
  model.coefficients = {0.6, -0.25};
  model.innovation_variance = 1.44;
  const std::vector<double> history = {1.0, 2.0};
  auto forecast = ForecastAr(model, history, 4);
  ASSERT_TRUE(forecast.ok());

  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.2);
  const int paths = 1000000;
  std::vector<double> sum(4, 0.0), sum2(4, 0.0);
  for (int k = 0; k < paths; ++k) {
    double y1 = 2.0, y2 = 1.0;
    for (int h = 0; h < 4; ++h) {
      const double y = 0.5 + 0.6 * y1 - 0.25 * y2 + normal(rng);
      y2 = y1;
      y1 = y;
      sum[h] += y;
      sum2[h] += y * y;
    }
  }
  for (int h = 0; h < 4; ++h) {
    const double mean = sum[h] / paths;
    const double var = sum2[h] / paths - mean * mean;
    EXPECT_NEAR(forecast->variance[h], var, 0.02 * var);
    EXPECT_NEAR(forecast->mean[h], mean, 0.01);
  }
}

TEST(ForecastArTest, HorizonOneEqualsOneStepPredictor) {
  const auto y = SimulateAr({0.5, 0.2}, 1.0, 1.0, 100, 4);
  auto model = FitAr(y, 2);
  ASSERT_TRUE(model.ok());
  auto forecast = ForecastAr(*model, y, 1);
  ASSERT_TRUE(forecast.ok());
  EXPECT_DOUBLE_EQ(forecast->mean[0], PredictNext(*model, y));
  EXPECT_DOUBLE_EQ(forecast->variance[0], model->innovation_variance);
}

TEST(ForecastArTest, Errors) {
  ArModel model;
  model.order = 2;
  model.coefficients = {0.1, 0.1};
  const std::vector<double> history = {1.0};
  EXPECT_EQ(ErrorKind(ForecastAr(model, history, 2).status()),
            "HistoryTooShort");
  const std::vector<double> longer = {1.0, 2.0};
  EXPECT_FALSE(ForecastAr(model, longer, 0).ok());
}

}  // namespace
}  // namespace sportscausal
