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
#include "sportscausal/state_space.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dense_gaussian.h"
#include "gtest/gtest.h"
#include "sportscausal/status.h"

namespace sportscausal {
namespace {

TEST(KalmanLogLikTest, MatchesDenseGaussianOnRandomInstances) {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    StateSpaceSpec spec;
    spec.trend = trial % 2 == 0 ? Trend::kLocalLevel : Trend::kLocalLinearTrend;
    spec.use_regression = trial % 3 != 0;
    const int n = 3 + trial % 8;  // 3..10
    StateVariances v;
    v.observation = 0.05 + 2 * uniform(rng);
    v.level = 0.01 + uniform(rng);
    v.slope = 0.001 + 0.2 * uniform(rng);
    std::vector<double> y(n), x(n);
    for (int t = 0; t < n; ++t) {
      x[t] = 10 + normal(rng);
      y[t] = 5 + 0.8 * x[t] + normal(rng) * 1.5;
    }
    const double beta = spec.use_regression ? 0.8 + 0.1 * normal(rng) : 0.0;
    auto ll = KalmanLogLik(
        spec, v,
        spec.use_regression ? std::optional<double>(beta) : std::nullopt, y,
        spec.use_regression ? std::optional<std::span<const double>>(x)
                            : std::nullopt);
    ASSERT_TRUE(ll.ok()) << ll.status();
    const long double oracle = DenseLogDensity(spec, v, beta, y, x);
    EXPECT_NEAR(*ll, (double)oracle, 1e-8) << "trial " << trial;
  }
}

TEST(KalmanLogLikTest, MatchesDenseGaussianWithSeasonal) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 10; ++trial) {
    StateSpaceSpec spec;
    spec.trend = trial % 2 ? Trend::kLocalLinearTrend : Trend::kLocalLevel;
    spec.seasonal_period = 2 + trial % 3;
    spec.use_regression = false;
    StateVariances v{0.7, 0.2, 0.05, 0.1};
    std::vector<double> y(8);
    for (int t = 0; t < 8; ++t) y[t] = std::sin(t) * 2 + normal(rng);
    auto ll = KalmanLogLik(spec, v, std::nullopt, y, std::nullopt);
    ASSERT_TRUE(ll.ok());
    EXPECT_NEAR(*ll, (double)DenseLogDensity(spec, v, 0, y, y), 1e-8);
  }
}

TEST(KalmanLogLikTest, ZeroObservationNoiseTracksObservations) {
  StateSpaceSpec spec;
  spec.use_regression = false;
  StateVariances v;
  v.level = 0.3;
  const std::vector<double> y = {1.0, 2.5, 2.0, 4.0, 3.5};
  auto fit = FilterStateSpace(spec, v, std::nullopt, y, std::nullopt);
  ASSERT_TRUE(fit.ok()) << fit.status();
  for (size_t t = 0; t < y.size(); ++t) {
    EXPECT_NEAR(fit->filtered_means[t](0), y[t], 1e-9);
  }
}

TEST(KalmanLogLikTest, ExactRegressionHasZeroResiduals) {
  StateSpaceSpec spec;
  StateVariances v;
  v.observation = 0.5;
  const std::vector<double> x = {1.0, 3.0, 2.0, 5.0, 4.0, 6.0};
  std::vector<double> y;
  for (double value : x) y.push_back(2.0 * value);
  auto fit = FilterStateSpace(spec, v, 2.0, y, x);
  ASSERT_TRUE(fit.ok()) << fit.status();
  double expected = 0.0;
  for (size_t t = 0; t < y.size(); ++t) {
    EXPECT_EQ(fit->innovations[t], 0.0);
    expected +=
        -0.5 * (std::log(2 * M_PI) + std::log(fit->innovation_variances[t]));
  }
  EXPECT_NEAR(fit->loglik, expected, 1e-12);
}

TEST(KalmanLogLikTest, Errors) {
  StateSpaceSpec spec;
  spec.use_regression = false;
  const std::vector<double> y = {1, 2, 3};
  EXPECT_EQ(ErrorKind(KalmanLogLik(spec, StateVariances{}, std::nullopt, y,
                                   std::nullopt)
                          .status()),
            "AllVariancesZero");
  const std::vector<double> bad = {1, NAN, 3};
  EXPECT_EQ(ErrorKind(KalmanLogLik(spec, StateVariances{1, 1}, std::nullopt,
                                   bad, std::nullopt)
                          .status()),
            "NonFiniteInput");
  StateSpaceSpec regression;
  EXPECT_EQ(ErrorKind(KalmanLogLik(regression, StateVariances{1, 1}, 1.0, y,
                                   std::nullopt)
                          .status()),
            "MissingRegressor");
  EXPECT_EQ(ErrorKind(KalmanLogLik(spec, StateVariances{-1, 1}, std::nullopt, y,
                                   std::nullopt)
                          .status()),
            "BadVariance");
  StateSpaceSpec seasonal;
  seasonal.seasonal_period = 1;
  EXPECT_FALSE(ValidateSpec(seasonal).ok());
}

TEST(FitStateSpaceTest, NoiselessCopyGivesUnitBeta) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<double> x(60);
  double level = 50;
  for (double& value : x) {
    level += normal(rng);
    value = level + normal(rng);
  }
  StateSpaceSpec spec;
  auto fit = FitStateSpace(x, x, spec);
  ASSERT_TRUE(fit.ok()) << fit.status();
  ASSERT_TRUE(fit->beta.has_value());
  EXPECT_NEAR(*fit->beta, 1.0, 1e-3);
  double mean = 0, var = 0;
  for (double value : x) mean += value / x.size();
  for (double value : x)
    var += (value - mean) * (value - mean) / (x.size() - 1);
  EXPECT_LT(fit->variances.observation, 1e-6 * var);
}

TEST(FitStateSpaceTest, RecoversLocalLevelVariances) {
  std::vector<double> obs, level;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(700 + seed);
    std::normal_distribution<double> normal;
    std::vector<double> y(300);
    double mu = 0;
    for (double& value : y) {
      mu += std::sqrt(0.1) * normal(rng);
      value = mu + normal(rng);
    }
    StateSpaceSpec spec;
    spec.use_regression = false;
    auto fit = FitStateSpace(y, std::nullopt, spec);
    ASSERT_TRUE(fit.ok()) << fit.status();
    obs.push_back(fit->variances.observation);
    level.push_back(fit->variances.level);
  }
  std::sort(obs.begin(), obs.end());
  std::sort(level.begin(), level.end());
  const double obs_median = 0.5 * (obs[9] + obs[10]);
  const double level_median = 0.5 * (level[9] + level[10]);
  EXPECT_GT(obs_median, 0.5);
  EXPECT_LT(obs_median, 2.0);
  EXPECT_GT(level_median, 0.05);
  EXPECT_LT(level_median, 0.2);
}

TEST(FitStateSpaceTest, LikelihoodIsLocalMaximum) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::vector<double> y(80), x(80);
  double mu = 10;
  for (int t = 0; t < 80; ++t) {
    mu += 0.3 * normal(rng);
    x[t] = 20 + normal(rng);
    y[t] = mu + 0.5 * x[t] + 0.7 * normal(rng);
  }
  StateSpaceSpec spec;
  auto fit = FitStateSpace(y, x, spec);
  ASSERT_TRUE(fit.ok());
  for (double factor : {0.8, 1.25}) {
    StateVariances v = fit->variances;
    v.observation *= factor;
    EXPECT_LE(*KalmanLogLik(spec, v, fit->beta, y, x), fit->loglik + 1e-7);
    v = fit->variances;
    v.level *= factor;
    EXPECT_LE(*KalmanLogLik(spec, v, fit->beta, y, x), fit->loglik + 1e-7);
  }
  for (double delta : {-0.01, 0.01}) {
    EXPECT_LE(*KalmanLogLik(spec, fit->variances, *fit->beta + delta, y, x),
              fit->loglik + 1e-9);
  }
}

TEST(FitStateSpaceTest, TooShort) {
  const std::vector<double> y = {1, 2, 3};
  StateSpaceSpec spec;
  spec.use_regression = false;
  EXPECT_EQ(ErrorKind(FitStateSpace(y, std::nullopt, spec).status()),
            "TooShort");
  spec.seasonal_period = 4;
  const std::vector<double> eight(8, 1.0);
  EXPECT_EQ(ErrorKind(FitStateSpace(eight, std::nullopt, spec).status()),
            "TooShort");
}

StateSpaceFit StaticFit(double level, double observation, bool regression,
                        std::optional<double> beta) {
  StateSpaceFit fit;
  fit.spec.use_regression = regression;
  fit.beta = beta;
  fit.variances.observation = observation;
  fit.filtered_means = {Eigen::VectorXd::Constant(1, level)};
  fit.filtered_covariances = {Eigen::MatrixXd::Zero(1, 1)};
  return fit;
}

TEST(PredictCounterfactualTest, StaticModel) {
  auto forecast =
      PredictCounterfactual(StaticFit(5.0, 0.4, false, {}), std::nullopt, 4);
  ASSERT_TRUE(forecast.ok());
  for (int h = 0; h < 4; ++h) {
    EXPECT_DOUBLE_EQ(forecast->mean[h], 5.0);
    EXPECT_DOUBLE_EQ(forecast->variance[h], 0.4);
  }
}

TEST(PredictCounterfactualTest, RegressionIsLinear) {
  const std::vector<double> x = {1, 2, 3};
  auto forecast = PredictCounterfactual(StaticFit(0.0, 0.0, true, 2.0), x, 3);
  ASSERT_TRUE(forecast.ok());
  EXPECT_EQ(forecast->mean, (std::vector<double>{2, 4, 6}));
  EXPECT_EQ(ErrorKind(PredictCounterfactual(StaticFit(0, 0, true, 2.0),
                                            std::nullopt, 3)
                          .status()),
            "MissingRegressor");
}

TEST(PredictCounterfactualTest, HorizonOneMatchesFilterOneStepVariance) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal;
  std::vector<double> y(30);
  for (int t = 0; t < 30; ++t) y[t] = 0.1 * t + std::sin(t) + normal(rng);
  // Append m + s sqrt((n + 1) / n), which leaves the sample variance and so
  // the prior unchanged.
  double mean = 0, ss = 0;
  for (double v : y) mean += v / 30;
  for (double v : y) ss += (v - mean) * (v - mean);
  const std::vector<double> head = y;
  y.push_back(mean + std::sqrt(ss / 29 * 31.0 / 30.0));

  StateSpaceSpec spec;
  spec.trend = Trend::kLocalLinearTrend;
  spec.seasonal_period = 3;
  spec.use_regression = false;
  const StateVariances v{0.5, 0.1, 0.01, 0.05};
  auto short_fit = FilterStateSpace(spec, v, std::nullopt, head, std::nullopt);
  auto long_fit = FilterStateSpace(spec, v, std::nullopt, y, std::nullopt);
  ASSERT_TRUE(short_fit.ok() && long_fit.ok());
  ASSERT_NEAR(short_fit->prior_variance, long_fit->prior_variance,
              1e-9 * long_fit->prior_variance);
  auto forecast = PredictCounterfactual(*short_fit, std::nullopt, 1);
  ASSERT_TRUE(forecast.ok());
  const double one_step = long_fit->innovation_variances.back();
  EXPECT_NEAR(forecast->variance[0], one_step, 1e-7 * one_step);
  EXPECT_NEAR(forecast->mean[0], y.back() - long_fit->innovations.back(), 1e-7);
}

TEST(PredictCounterfactualTest, VariancesNonNegative) {
  std::vector<double> y(20);
  for (int t = 0; t < 20; ++t) y[t] = std::cos(t);
  StateSpaceSpec spec;
  spec.seasonal_period = 4;
  spec.use_regression = false;
  auto fit = FilterStateSpace(spec, StateVariances{0.1, 0.0, 0.0, 0.2},
                              std::nullopt, y, std::nullopt);
  ASSERT_TRUE(fit.ok());
  auto forecast = PredictCounterfactual(*fit, std::nullopt, 12);
  ASSERT_TRUE(forecast.ok());
  for (double v : forecast->variance) EXPECT_GE(v, 0.0);
}

}  // namespace
}  // namespace sportscausal
