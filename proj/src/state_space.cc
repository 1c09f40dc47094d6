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
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "gsl/gsl_multimin.h"
#include "gsl/gsl_vector.h"
#include "sportscausal/status.h"

namespace sportscausal {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kMinLogRatio = -23.025850929940457;  // ln 1e-10
constexpr double kMaxLogRatio = 9.2103403719761836;   // ln 1e4

struct System {
  Eigen::MatrixXd transition;
  Eigen::VectorXd loading;  // observation row Z
  Eigen::MatrixXd state_noise;
  double observation_noise = 0.0;
};

int SeasonalPosition(const StateSpaceSpec& spec) {
  return spec.trend == Trend::kLocalLinearTrend ? 2 : 1;
}

System BuildSystem(const StateSpaceSpec& spec, const StateVariances& v) {
  const int dim = spec.state_dim();
  System sys;
  sys.transition = Eigen::MatrixXd::Zero(dim, dim);
  sys.loading = Eigen::VectorXd::Zero(dim);
  sys.state_noise = Eigen::MatrixXd::Zero(dim, dim);
  sys.observation_noise = v.observation;

  sys.transition(0, 0) = 1.0;
  sys.loading(0) = 1.0;
  sys.state_noise(0, 0) = v.level;
  if (spec.trend == Trend::kLocalLinearTrend) {
    sys.transition(0, 1) = 1.0;
    sys.transition(1, 1) = 1.0;
    sys.state_noise(1, 1) = v.slope;
  }
  if (spec.seasonal_period.has_value()) {
    const int s0 = SeasonalPosition(spec);
    const int count = *spec.seasonal_period - 1;
    for (int j = 0; j < count; ++j) sys.transition(s0, s0 + j) = -1.0;
    for (int j = 1; j < count; ++j) sys.transition(s0 + j, s0 + j - 1) = 1.0;
    sys.loading(s0) = 1.0;
    sys.state_noise(s0, s0) = v.seasonal;
  }
  return sys;
}

// Output of one filter pass over several data columns that share the same
// gains. Each column starts from its own level mean (its first value).
struct FilterOutput {
  Eigen::MatrixXd innovations;  // n x columns
  Eigen::VectorXd innovation_variances;
  std::vector<Eigen::VectorXd> filtered_means;  // column 0 only
  std::vector<Eigen::MatrixXd> filtered_covariances;
  Eigen::VectorXd last_mean;
  Eigen::MatrixXd last_covariance;
};

absl::StatusOr<FilterOutput> RunFilter(const System& sys,
                                       const Eigen::MatrixXd& data,
                                       double prior_variance,
                                       bool keep_states) {
  // Recursion in long double; outputs are rounded to double.
  using Real = long double;
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const Eigen::Index n = data.rows();
  const Eigen::Index columns = data.cols();
  const Eigen::Index dim = sys.transition.rows();
  const Matrix transition = sys.transition.cast<Real>();
  const Vector loading = sys.loading.cast<Real>();
  const Matrix state_noise = sys.state_noise.cast<Real>();
  const Real observation_noise = sys.observation_noise;

  Matrix means = Matrix::Zero(dim, columns);
  means.row(0) = data.row(0).cast<Real>();
  Matrix cov = Real(prior_variance) * Matrix::Identity(dim, dim);

  FilterOutput out;
  out.innovations.resize(n, columns);
  out.innovation_variances.resize(n);
  if (keep_states) {
    out.filtered_means.reserve(n);
    out.filtered_covariances.reserve(n);
  }
  Vector pz(dim);
  Vector gain(dim);
  for (Eigen::Index t = 0; t < n; ++t) {
    pz.noalias() = cov * loading;
    const Real f = loading.dot(pz) + observation_noise;
    if (!(f > 0.0L) || !std::isfinite(f)) {
      return NumericalError("SingularInnovation",
                            absl::StrCat("innovation variance ",
                                         static_cast<double>(f), " at t=", t));
    }
    const Eigen::Matrix<Real, 1, Eigen::Dynamic> v =
        data.row(t).cast<Real>() - loading.transpose() * means;
    out.innovations.row(t) = v.cast<double>();
    out.innovation_variances(t) = static_cast<double>(f);
    gain = pz / f;
    means.noalias() += gain * v;
    cov.noalias() -= gain * pz.transpose();
    cov = (Real(0.5) * (cov + cov.transpose())).eval();
    if (keep_states) {
      out.filtered_means.push_back(means.col(0).cast<double>());
      out.filtered_covariances.push_back(cov.cast<double>());
    }
    if (t + 1 < n) {
      means = (transition * means).eval();
      cov = (transition * cov * transition.transpose()).eval() + state_noise;
    }
  }
  out.last_mean = means.col(0).cast<double>();
  out.last_covariance = cov.cast<double>();
  return out;
}

double LogDetTerm(const Eigen::VectorXd& f) {
  double total = 0.0;
  for (Eigen::Index t = 0; t < f.size(); ++t) total += kLog2Pi + std::log(f(t));
  return total;
}

double SampleVariance(std::span<const double> y) {
  if (y.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(y.size() - 1);
}

bool AllFinite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

bool NearlyConstant(std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double magnitude = std::max(std::fabs(*lo), std::fabs(*hi));
  return *hi - *lo <= 1e-12 * (1.0 + magnitude);
}

absl::Status CheckInputs(const StateSpaceSpec& spec, std::optional<double> beta,
                         std::span<const double> y,
                         std::optional<std::span<const double>> x) {
  if (auto status = ValidateSpec(spec); !status.ok()) return status;
  if (y.empty()) return ValidationError("TooShort", "empty series");
  if (!AllFinite(y)) return ValidationError("NonFiniteInput", "y not finite");
  if (spec.use_regression) {
    if (!x.has_value()) {
      return ValidationError("MissingRegressor",
                             "regression model needs a control series");
    }
    if (x->size() != y.size()) {
      return ValidationError("DimensionMismatch",
                             "regressor length differs from series length");
    }
    if (!AllFinite(*x))
      return ValidationError("NonFiniteInput", "x not finite");
    if (beta.has_value() && !std::isfinite(*beta)) {
      return ValidationError("NonFiniteInput", "beta not finite");
    }
  } else if (x.has_value()) {
    return ValidationError("UnexpectedRegressor",
                           "regressor given for a model without regression");
  }
  return absl::OkStatus();
}

absl::Status CheckVariances(const StateSpaceSpec& spec,
                            const StateVariances& v) {
  std::vector<double> used = {v.observation, v.level};
  if (spec.trend == Trend::kLocalLinearTrend) used.push_back(v.slope);
  if (spec.seasonal_period.has_value()) used.push_back(v.seasonal);
  bool any_positive = false;
  for (double value : used) {
    if (!std::isfinite(value) || value < 0.0) {
      return ValidationError("BadVariance",
                             absl::StrCat("variance must be finite and >= 0, "
                                          "got ",
                                          value));
    }
    any_positive = any_positive || value > 0.0;
  }
  if (!any_positive) {
    return ValidationError("AllVariancesZero",
                           "at least one noise variance must be positive");
  }
  return absl::OkStatus();
}

// Free parameters of the likelihood search: log(variance / scale) for every
// component present in the model, in the order obs, level, slope, seasonal.
struct Parameterization {
  StateSpaceSpec spec;
  double scale = 1.0;

  int size() const {
    return 2 + (spec.trend == Trend::kLocalLinearTrend ? 1 : 0) +
           (spec.seasonal_period.has_value() ? 1 : 0);
  }

  StateVariances ToVariances(std::span<const double> theta) const {
    auto var = [&](double log_ratio) {
      return scale *
             std::exp(std::clamp(log_ratio, kMinLogRatio, kMaxLogRatio));
    };
    StateVariances v;
    size_t i = 0;
    v.observation = var(theta[i++]);
    v.level = var(theta[i++]);
    if (spec.trend == Trend::kLocalLinearTrend) v.slope = var(theta[i++]);
    if (spec.seasonal_period.has_value()) v.seasonal = var(theta[i++]);
    return v;
  }
};

struct Objective {
  Parameterization param;
  Eigen::MatrixXd data;  // y, and x when regressing
  double prior_variance = 0.0;
  bool regress = false;
  bool beta_identified = false;

  // Profile log-likelihood at theta; sets *beta to the maximizing value.
  double ProfileLogLik(std::span<const double> theta, double* beta) const {
    const System sys = BuildSystem(param.spec, param.ToVariances(theta));
    auto out = RunFilter(sys, data, prior_variance, /*keep_states=*/false);
    if (!out.ok()) return -std::numeric_limits<double>::infinity();
    const Eigen::VectorXd inv_f = out->innovation_variances.cwiseInverse();
    const auto vy = out->innovations.col(0);
    double quad = vy.cwiseProduct(vy).dot(inv_f);
    *beta = 0.0;
    if (regress && beta_identified) {
      const auto vx = out->innovations.col(1);
      const double sxx = vx.cwiseProduct(vx).dot(inv_f);
      const double sxy = vx.cwiseProduct(vy).dot(inv_f);
      if (sxx > 0.0) {
        *beta = sxy / sxx;
        quad = std::max(0.0, quad - sxy * sxy / sxx);
      }
    }
    const double ll = -0.5 * (LogDetTerm(out->innovation_variances) + quad);
    return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
  }
};

double NegativeProfile(const gsl_vector* x, void* params) {
  const auto* objective = static_cast<const Objective*>(params);
  const std::span<const double> theta(x->data, x->size);
  double beta = 0.0;
  const double ll = objective->ProfileLogLik(theta, &beta);
  if (!std::isfinite(ll)) return std::numeric_limits<double>::max();
  // Keep the simplex near the box; values outside are clamped anyway.
  double excess = 0.0;
  for (double value : theta) {
    if (value < kMinLogRatio) excess += (kMinLogRatio - value);
    if (value > kMaxLogRatio) excess += (value - kMaxLogRatio);
  }
  return -ll + 1e-3 * excess * excess;
}

struct SearchResult {
  std::vector<double> theta;
  double value = std::numeric_limits<double>::max();
};

SearchResult NelderMead(const Objective& objective,
                        const std::vector<double>& start) {
  const size_t dim = start.size();
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(
      gsl_vector_alloc(dim), &gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(
      gsl_vector_alloc(dim), &gsl_vector_free);
  for (size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x.get(), i, start[i]);
    gsl_vector_set(step.get(), i, 1.0);
  }
  gsl_multimin_function function;
  function.n = dim;
  function.f = &NegativeProfile;
  function.params = const_cast<Objective*>(&objective);

  std::unique_ptr<gsl_multimin_fminimizer,
                  decltype(&gsl_multimin_fminimizer_free)>
      minimizer(gsl_multimin_fminimizer_alloc(
                    gsl_multimin_fminimizer_nmsimplex2, dim),
                &gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(minimizer.get(), &function, x.get(), step.get());
  for (int iter = 0; iter < 1000; ++iter) {
    if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(minimizer.get());
    if (gsl_multimin_test_size(size, 1e-6) == GSL_SUCCESS) break;
  }
  SearchResult result;
  const gsl_vector* best = gsl_multimin_fminimizer_x(minimizer.get());
  result.theta.assign(best->data, best->data + dim);
  result.value = gsl_multimin_fminimizer_minimum(minimizer.get());
  return result;
}

// Five fixed starts in log(variance / scale) space.
std::vector<std::vector<double>> StartPoints(const Parameterization& param) {
  constexpr std::array<std::array<double, 2>, 5> kStarts = {{
      {0.5, 0.05},
      {0.1, 0.1},
      {0.01, 0.5},
      {0.9, 1e-3},
      {1e-4, 1e-4},
  }};
  std::vector<std::vector<double>> starts;
  for (const auto& [obs, state] : kStarts) {
    std::vector<double> theta = {std::log(obs), std::log(state)};
    if (param.spec.trend == Trend::kLocalLinearTrend) {
      theta.push_back(std::log(state * 0.01));
    }
    if (param.spec.seasonal_period.has_value()) {
      theta.push_back(std::log(state * 0.1));
    }
    starts.push_back(std::move(theta));
  }
  return starts;
}

}  // namespace

int StateSpaceSpec::state_dim() const {
  return (trend == Trend::kLocalLinearTrend ? 2 : 1) +
         (seasonal_period.has_value() ? *seasonal_period - 1 : 0);
}

absl::Status ValidateSpec(const StateSpaceSpec& spec) {
  if (spec.seasonal_period.has_value() && *spec.seasonal_period < 2) {
    return ValidationError("BadSpec", "seasonal period must be >= 2");
  }
  return absl::OkStatus();
}

double DiffusePriorVariance(std::span<const double> y) {
  const double variance = SampleVariance(y);
  if (variance > 0.0 && std::isfinite(variance)) return 1e6 * variance;
  double mean = 0.0;
  for (double v : y) mean += v;
  if (!y.empty()) mean /= static_cast<double>(y.size());
  return 1e6 * std::max(mean * mean, 1.0);
}

absl::StatusOr<StateSpaceFit> FilterStateSpace(
    const StateSpaceSpec& spec, const StateVariances& variances,
    std::optional<double> beta, std::span<const double> y,
    std::optional<std::span<const double>> x) {
  if (auto status = CheckInputs(spec, beta, y, x); !status.ok()) return status;
  if (spec.use_regression && !beta.has_value()) {
    return ValidationError("MissingBeta", "regression model needs beta");
  }
  if (auto status = CheckVariances(spec, variances); !status.ok()) {
    return status;
  }
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd data(n, 1);
  for (Eigen::Index t = 0; t < n; ++t) {
    data(t, 0) = y[t] - (spec.use_regression ? *beta * (*x)[t] : 0.0);
  }
  const double prior = DiffusePriorVariance(y);
  auto out = RunFilter(BuildSystem(spec, variances), data, prior,
                       /*keep_states=*/true);
  if (!out.ok()) return out.status();

  StateSpaceFit fit;
  fit.spec = spec;
  if (spec.use_regression) fit.beta = beta;
  fit.variances = variances;
  fit.filtered_means = std::move(out->filtered_means);
  fit.filtered_covariances = std::move(out->filtered_covariances);
  fit.innovations.assign(out->innovations.data(), out->innovations.data() + n);
  fit.innovation_variances.assign(out->innovation_variances.data(),
                                  out->innovation_variances.data() + n);
  const Eigen::VectorXd& f = out->innovation_variances;
  const Eigen::VectorXd v = out->innovations.col(0);
  fit.loglik = -0.5 * (LogDetTerm(f) + v.cwiseProduct(v).dot(f.cwiseInverse()));
  fit.prior_variance = prior;
  if (!std::isfinite(fit.loglik)) {
    return NumericalError("NonFiniteLikelihood", "log-likelihood not finite");
  }
  return fit;
}

absl::StatusOr<double> KalmanLogLik(const StateSpaceSpec& spec,
                                    const StateVariances& variances,
                                    std::optional<double> beta,
                                    std::span<const double> y,
                                    std::optional<std::span<const double>> x) {
  auto fit = FilterStateSpace(spec, variances, beta, y, x);
  if (!fit.ok()) return fit.status();
  return fit->loglik;
}

absl::StatusOr<StateSpaceFit> FitStateSpace(
    std::span<const double> y_pre, std::optional<std::span<const double>> x_pre,
    const StateSpaceSpec& spec) {
  if (auto status = ValidateSpec(spec); !status.ok()) return status;
  const int min_length = 5 + spec.seasonal_period.value_or(0);
  if (static_cast<int>(y_pre.size()) < min_length) {
    return ValidationError(
        "TooShort", absl::StrCat("state-space fit needs >= ", min_length,
                                 " pre-period points, got ", y_pre.size()));
  }
  if (auto status = CheckInputs(spec, std::nullopt, y_pre, x_pre);
      !status.ok()) {
    return status;
  }

  Objective objective;
  objective.param.spec = spec;
  const double variance = SampleVariance(y_pre);
  objective.param.scale =
      variance > 0.0 ? variance : DiffusePriorVariance(y_pre) / 1e6;
  objective.prior_variance = DiffusePriorVariance(y_pre);
  objective.regress = spec.use_regression;
  const auto n = static_cast<Eigen::Index>(y_pre.size());
  objective.data.resize(n, spec.use_regression ? 2 : 1);
  for (Eigen::Index t = 0; t < n; ++t) {
    objective.data(t, 0) = y_pre[t];
    if (spec.use_regression) objective.data(t, 1) = (*x_pre)[t];
  }
  objective.beta_identified = spec.use_regression && !NearlyConstant(*x_pre);

  SearchResult best;
  for (const auto& start : StartPoints(objective.param)) {
    SearchResult candidate = NelderMead(objective, start);
    if (candidate.value < best.value) best = std::move(candidate);
  }
  if (best.value == std::numeric_limits<double>::max()) {
    return NumericalError("OptimFailed", "no finite-likelihood point found");
  }
  // One restart from the incumbent guards against a collapsed simplex.
  if (SearchResult polished = NelderMead(objective, best.theta);
      polished.value < best.value) {
    best = std::move(polished);
  }

  double beta = 0.0;
  objective.ProfileLogLik(best.theta, &beta);
  std::vector<double> clamped = best.theta;
  for (double& value : clamped)
    value = std::clamp(value, kMinLogRatio, kMaxLogRatio);
  const StateVariances variances = objective.param.ToVariances(clamped);
  auto fit = FilterStateSpace(
      spec, variances,
      spec.use_regression ? std::optional<double>(beta) : std::nullopt, y_pre,
      x_pre);
  if (!fit.ok()) {
    return NumericalError("OptimFailed", std::string(fit.status().message()));
  }
  return fit;
}

absl::StatusOr<Forecast> PredictCounterfactual(
    const StateSpaceFit& fit, std::optional<std::span<const double>> x_post,
    int horizon) {
  if (horizon < 1) return ValidationError("BadHorizon", "horizon must be >= 1");
  if (fit.filtered_means.empty()) {
    return ValidationError("EmptyFit", "fit has no filtered states");
  }
  if (fit.spec.use_regression) {
    if (!x_post.has_value()) {
      return ValidationError("MissingRegressor",
                             "post-period control series required");
    }
    if (static_cast<int>(x_post->size()) != horizon) {
      return ValidationError(
          "MissingRegressor",
          absl::StrCat("need ", horizon, " regressor values, got ",
                       x_post->size()));
    }
  }
  const System sys = BuildSystem(fit.spec, fit.variances);
  Eigen::VectorXd mean = fit.filtered_means.back();
  Eigen::MatrixXd cov = fit.filtered_covariances.back();
  Forecast forecast;
  forecast.mean.resize(horizon);
  forecast.variance.resize(horizon);
  for (int h = 0; h < horizon; ++h) {
    mean = (sys.transition * mean).eval();
    cov = (sys.transition * cov * sys.transition.transpose()).eval() +
          sys.state_noise;
    double point = sys.loading.dot(mean);
    if (fit.spec.use_regression) point += fit.beta.value_or(0.0) * (*x_post)[h];
    forecast.mean[h] = point;
    forecast.variance[h] = std::max(
        0.0, sys.loading.dot(cov * sys.loading) + sys.observation_noise);
  }
  return forecast;
}

}  // namespace sportscausal
