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
#ifndef SPORTSCAUSAL_SIMULATE_H_
#define SPORTSCAUSAL_SIMULATE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sportscausal/panel.h"

namespace sportscausal {

// Synthetic experiment with known direct and spillover effects.
//
//   y_it = baseline + offset_i + season_t + f_t + e_it
//          + 1{t > t0} ramp(t) (d D_i + s (1 - D_i))
//          + 1{t > t0} ramp(t) confounder_strength z_i^3 / 3
//
// f_t is a market-wide AR(1) factor shared by every subject, e_it an
// independent AR(1) per subject, both with coefficient ar_coefficient and
// stationary starts. offset_i = unit_sd noise_sd u_i + confounder_strength z_i
// with u_i, z_i ~ N(0, 1). With confounder_strength > 0 the treatment is drawn
// Bernoulli(sigmoid(logit(n / (m + n)) + confounder_strength z_i)) and z is
// exported as feature "x1"; otherwise exactly n subjects are treated,
// uniformly at random. Spillover only flows from treated to control.
struct SimConfig {
  int m = 100;
  int n = 100;
  int t0 = 60;
  int t_post = 30;
  double baseline = 100.0;
  double ar_coefficient = 0.6;
  double noise_sd = 1.0;
  double direct_effect = 10.0;
  double spillover_effect = 0.0;
  int ramp_length = 0;
  double confounder_strength = 0.0;
  std::optional<int> seasonal_period;
  double seasonal_amplitude = 0.0;
  double unit_sd = 1.0;  // subject offset s.d., in units of noise_sd
  std::optional<double> common_noise_sd;  // defaults to noise_sd
  std::uint64_t seed = 1;
};

struct SimTruth {
  double direct_effect = 0.0;
  double spillover_effect = 0.0;
  int t0 = 0;
  int m = 0;
  int n = 0;
};

struct SimulatedExperiment {
  PanelData panel;
  SimTruth truth;
};

absl::Status ValidateSimConfig(const SimConfig& config);

// Fully determined by config.seed. A non-zero `treated_post_redraw` re-draws
// the post-period idiosyncratic noise of treated subjects only.
absl::StatusOr<SimulatedExperiment> GenerateExperiment(
    const SimConfig& config, std::uint64_t treated_post_redraw = 0);

struct SweepCell {
  double fraction = 0.0;
  SimulatedExperiment experiment;
};

// For each treated fraction rho: n = round(rho N), m = N - n with
// N = base.m + base.n, spillover s = -conservation * d * n / m, and a seed
// derived from (base.seed, fraction index).
absl::StatusOr<std::vector<SweepCell>> FractionSweep(
    const SimConfig& base, std::span<const double> fractions,
    double conservation);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_SIMULATE_H_
