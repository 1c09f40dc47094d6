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
#include "sportscausal/simulate.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "sportscausal/random.h"
#include "sportscausal/status.h"

namespace sportscausal {
namespace {

enum Stream : std::uint64_t {
  kAssignment = 1,
  kUnitTraits = 2,
  kCommonFactor = 3,
  kPreNoise = 4,
  kPostNoise = 5,
  kSweep = 6,
};

// AR(1) path of `length` steps continuing from `previous` (or drawn from the
// stationary law when `previous` is absent).
std::vector<double> Ar1Path(Rng& rng, int length, double phi, double sd,
                            std::optional<double> previous) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> path(length);
  double state = previous.has_value()
                     ? *previous
                     : normal(rng) * sd / std::sqrt(1.0 - phi * phi);
  for (int t = 0; t < length; ++t) {
    if (t > 0 || previous.has_value()) state = phi * state + sd * normal(rng);
    path[t] = state;
  }
  return path;
}

double Ramp(int steps_after_t0, int ramp_length) {
  if (ramp_length <= 0) return 1.0;
  return std::min(1.0, static_cast<double>(steps_after_t0) / ramp_length);
}

}  // namespace

absl::Status ValidateSimConfig(const SimConfig& config) {
  if (config.m < 1 || config.n < 1) {
    return ValidationError("InvalidConfig", "m and n must be >= 1");
  }
  if (config.t0 < 1 || config.t_post < 1) {
    return ValidationError("InvalidConfig", "t0 and t_post must be >= 1");
  }
  if (!(std::fabs(config.ar_coefficient) < 1.0)) {
    return ValidationError("InvalidConfig", "|ar_coefficient| must be < 1");
  }
  if (!(config.noise_sd >= 0.0) || !(config.unit_sd >= 0.0) ||
      (config.common_noise_sd.has_value() &&
       !(*config.common_noise_sd >= 0.0))) {
    return ValidationError("InvalidConfig", "standard deviations must be >= 0");
  }
  if (config.ramp_length < 0) {
    return ValidationError("InvalidConfig", "ramp_length must be >= 0");
  }
  if (config.seasonal_period.has_value() && *config.seasonal_period < 2) {
    return ValidationError("InvalidConfig", "seasonal_period must be >= 2");
  }
  for (double v :
       {config.baseline, config.direct_effect, config.spillover_effect,
        config.confounder_strength, config.seasonal_amplitude}) {
    if (!std::isfinite(v)) {
      return ValidationError("InvalidConfig", "parameters must be finite");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SimulatedExperiment> GenerateExperiment(
    const SimConfig& config, std::uint64_t treated_post_redraw) {
  if (auto status = ValidateSimConfig(config); !status.ok()) return status;
  const int units = config.m + config.n;
  const int periods = config.t0 + config.t_post;
  const double phi = config.ar_coefficient;
  const bool confounded = config.confounder_strength != 0.0;

  std::vector<double> unit_offset(units);
  std::vector<double> confounder(units);
  {
    Rng rng = MakeRng(config.seed, kUnitTraits);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < units; ++i) {
      const double u = normal(rng);
      const double z = normal(rng);
      confounder[i] = z;
      unit_offset[i] =
          config.unit_sd * config.noise_sd * u + config.confounder_strength * z;
    }
  }

  std::vector<int> treatment(units, 0);
  {
    Rng rng = MakeRng(config.seed, kAssignment);
    if (!confounded) {
      std::vector<int> order(units);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (int k = 0; k < config.n; ++k) treatment[order[k]] = 1;
    } else {
      const double base_logit =
          std::log(static_cast<double>(config.n) / config.m);
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      // Redraw the (rare) assignment with an empty arm.
      for (int attempt = 0; attempt < 1000; ++attempt) {
        int treated = 0;
        for (int i = 0; i < units; ++i) {
          const double eta =
              base_logit + config.confounder_strength * confounder[i];
          treatment[i] = uniform(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;
          treated += treatment[i];
        }
        if (treated > 0 && treated < units) break;
        if (attempt == 999) {
          return ValidationError("InvalidConfig",
                                 "confounded assignment left an arm empty");
        }
      }
    }
  }

  const double common_sd = config.common_noise_sd.value_or(config.noise_sd);
  std::vector<double> common;
  {
    Rng rng = MakeRng(config.seed, kCommonFactor);
    common = Ar1Path(rng, periods, phi, common_sd, std::nullopt);
  }

  SimulatedExperiment out;
  PanelData& panel = out.panel;
  panel.outcomes.resize(units, periods);
  panel.treatment = treatment;
  panel.t0 = config.t0;
  panel.unit_ids.resize(units);
  if (confounded) {
    panel.features.resize(units, 1);
    panel.feature_names = {"x1"};
  } else {
    panel.features.resize(units, 0);
  }

  for (int i = 0; i < units; ++i) {
    panel.unit_ids[i] = absl::StrFormat("u%04d", i + 1);
    if (confounded) panel.features(i, 0) = confounder[i];

    Rng pre_rng = MakeRng(config.seed, kPreNoise, i);
    std::vector<double> noise =
        Ar1Path(pre_rng, config.t0, phi, config.noise_sd, std::nullopt);
    const std::uint64_t salt = treatment[i] == 1 ? treated_post_redraw : 0;
    Rng post_rng = MakeRng(config.seed, kPostNoise, i, salt);
    const std::vector<double> post =
        Ar1Path(post_rng, config.t_post, phi, config.noise_sd, noise.back());
    noise.insert(noise.end(), post.begin(), post.end());

    const double effect =
        treatment[i] == 1 ? config.direct_effect : config.spillover_effect;
    const double z = confounder[i];
    const double growth = config.confounder_strength * z * z * z / 3.0;
    for (int t = 0; t < periods; ++t) {
      double y = config.baseline + unit_offset[i] + common[t] + noise[t];
      if (config.seasonal_period.has_value()) {
        y += config.seasonal_amplitude *
             std::sin(2.0 * std::numbers::pi * (t + 1) /
                      *config.seasonal_period);
      }
      if (t >= config.t0) {
        const double ramp = Ramp(t - config.t0 + 1, config.ramp_length);
        y += ramp * (effect + growth);
      }
      panel.outcomes(i, t) = y;
    }
  }

  out.truth.direct_effect = config.direct_effect;
  out.truth.spillover_effect = config.spillover_effect;
  out.truth.t0 = config.t0;
  out.truth.n = panel.num_treated();
  out.truth.m = units - out.truth.n;
  if (auto status = ValidatePanel(panel); !status.ok()) return status;
  return out;
}

absl::StatusOr<std::vector<SweepCell>> FractionSweep(
    const SimConfig& base, std::span<const double> fractions,
    double conservation) {
  const int total = base.m + base.n;
  std::vector<SweepCell> cells;
  for (size_t k = 0; k < fractions.size(); ++k) {
    const double rho = fractions[k];
    if (!(rho > 0.0 && rho < 1.0)) {
      return ValidationError("InvalidFraction",
                             absl::StrCat("fraction must lie in (0,1): ", rho));
    }
    const int n = static_cast<int>(std::lround(rho * total));
    const int m = total - n;
    if (n < 1 || m < 1) {
      return ValidationError(
          "InvalidFraction",
          absl::StrCat("fraction ", rho, " leaves an empty arm of ", total));
    }
    SimConfig config = base;
    config.n = n;
    config.m = m;
    config.spillover_effect =
        -conservation * base.direct_effect * static_cast<double>(n) / m + 0.0;
    config.seed = DeriveSeed(base.seed, kSweep, k);
    auto experiment = GenerateExperiment(config);
    if (!experiment.ok()) return experiment.status();
    cells.push_back({rho, *std::move(experiment)});
  }
  return cells;
}

}  // namespace sportscausal
