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
#include "sportscausal/cli.h"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "sportscausal/estimators.h"
#include "sportscausal/panel.h"
#include "sportscausal/parallel.h"
#include "sportscausal/report.h"
#include "sportscausal/simulate.h"
#include "sportscausal/status.h"
#include "sportscausal/svg_plot.h"
#include "sportscausal/text.h"

namespace sportscausal {
namespace {

namespace fs = std::filesystem;

enum class Kind { kInt, kDouble, kString, kBool, kDoubles, kFlag };

// One configurable value: JSON config key, CLI11 option names, type and
// default. A null default means "unset".
struct Param {
  std::string key;
  std::string flag;
  Kind kind;
  Json fallback;
  std::string help;
};

Param P(std::string key, Kind kind, Json fallback, std::string help,
        std::string flag = "") {
  if (flag.empty()) {
    flag = "--" + key;
    for (char& c : flag) c = c == '_' ? '-' : c;
  }
  return {std::move(key), std::move(flag), kind, std::move(fallback),
          std::move(help)};
}

// Simulator parameters shared by `simulate` and `bench`.
std::vector<Param> GeneratorParams() {
  return {
      P("t0", Kind::kInt, 60, "last pre-period time point"),
      P("t_post", Kind::kInt, 30, "post-period length"),
      P("baseline", Kind::kDouble, 100.0, "outcome level"),
      P("phi", Kind::kDouble, 0.6, "AR(1) coefficient"),
      P("sigma", Kind::kDouble, 1.0, "innovation s.d."),
      P("d", Kind::kDouble, 10.0, "direct effect on treated"),
      P("ramp", Kind::kInt, 0, "periods for effects to reach full size"),
      P("confounder", Kind::kDouble, 0.0, "confounder strength"),
      P("seasonal_period", Kind::kInt, nullptr, "seasonal period"),
      P("seasonal_amplitude", Kind::kDouble, 0.0, "seasonal amplitude"),
      P("unit_sd", Kind::kDouble, 1.0,
        "s.d. of subject offsets in units of sigma"),
      P("common_sd", Kind::kDouble, nullptr,
        "innovation s.d. of the shared factor (default sigma)"),
  };
}

std::vector<Param> SimulateParams() {
  std::vector<Param> params = {
      P("m", Kind::kInt, 100, "control subjects"),
      P("n", Kind::kInt, 100, "treated subjects"),
      P("s", Kind::kDouble, 0.0, "spillover effect on control"),
      P("seed", Kind::kInt, 1, "random seed"),
  };
  for (auto& p : GeneratorParams()) params.push_back(std::move(p));
  return params;
}

// Model parameters shared by `analyze` and `bench`.
std::vector<Param> ModelParams(Json replicates) {
  return {
      P("ar_max_order", Kind::kInt, kDefaultArMaxOrder, "largest AR order"),
      P("B", Kind::kInt, std::move(replicates), "bootstrap replicates",
        "-B,--replicates"),
      P("caliper_sd", Kind::kDouble, kDefaultCaliperSd,
        "caliper in pooled s.d. of logit scores"),
      P("trend", Kind::kString, "local_level",
        "local_level or local_linear_trend"),
      P("regression", Kind::kBool, true, "use the control series as regressor"),
      P("match_on_pre_mean", Kind::kBool, true,
        "match on pre-period means besides features"),
      P("workers", Kind::kInt, 1, "worker threads"),
  };
}

std::vector<Param> AnalyzeParams() {
  std::vector<Param> params = {
      P("method", Kind::kString, nullptr, "ancova, match, impact or sports",
        "method"),
      P("panel", Kind::kString, nullptr, "outcomes CSV"),
      P("features", Kind::kString, nullptr, "features CSV"),
      P("t0", Kind::kInt, nullptr, "last pre-period time label"),
      P("seasonal_period", Kind::kInt, nullptr, "seasonal period"),
      P("seed", Kind::kInt, 1, "bootstrap seed"),
      P("dump_model", Kind::kFlag, false, "write fitted models to model.json"),
  };
  for (auto& p : ModelParams(nullptr)) params.push_back(std::move(p));
  return params;
}

std::vector<Param> BenchParams() {
  std::vector<Param> params = {
      P("N", Kind::kInt, 400, "total subjects per cell", "-N,--units"),
      P("lambda", Kind::kDouble, 1.0, "spillover conservation factor"),
      P("fractions", Kind::kDoubles, Json::array({0.05, 0.5}),
        "treated fractions, comma separated"),
      P("seeds", Kind::kInt, 20, "seeds per fraction"),
      P("first_seed", Kind::kInt, 1, "first seed"),
  };
  for (auto& p : GeneratorParams()) params.push_back(std::move(p));
  for (auto& p : ModelParams(1)) params.push_back(std::move(p));
  return params;
}

absl::Status ConfigError(const std::string& detail) {
  return ValidationError("InvalidConfig", detail);
}

absl::StatusOr<Json> CheckJsonValue(const Param& param, const Json& value) {
  if (value.is_null() && param.fallback.is_null()) return value;
  const std::string where = "config key '" + param.key + "'";
  switch (param.kind) {
    case Kind::kInt:
      if (value.is_number_integer()) return value;
      return ConfigError(where + " must be an integer");
    case Kind::kDouble:
      if (value.is_number()) return Json(value.get<double>());
      return ConfigError(where + " must be a number");
    case Kind::kString:
      if (value.is_string()) return value;
      return ConfigError(where + " must be a string");
    case Kind::kBool:
    case Kind::kFlag:
      if (value.is_boolean()) return value;
      return ConfigError(where + " must be true or false");
    case Kind::kDoubles: {
      if (!value.is_array() || value.empty()) {
        return ConfigError(where + " must be a non-empty array of numbers");
      }
      Json out = Json::array();
      for (const auto& v : value) {
        if (!v.is_number()) {
          return ConfigError(where + " must be a non-empty array of numbers");
        }
        out.push_back(v.get<double>());
      }
      return out;
    }
  }
  return ConfigError(where + " has an unknown type");
}

absl::StatusOr<double> ParseNumber(const std::string& text,
                                   const std::string& where) {
  double value = 0.0;
  if (!absl::SimpleAtod(text, &value) || !std::isfinite(value)) {
    return ConfigError(where + ": '" + text + "' is not a finite number");
  }
  return value;
}

absl::StatusOr<Json> ParseFlagValue(const Param& param,
                                    const std::string& text) {
  const std::string where = "option " + param.flag;
  if (param.fallback.is_null() && (text == "none" || text == "null")) {
    return Json(nullptr);
  }
  switch (param.kind) {
    case Kind::kInt: {
      std::int64_t value = 0;
      if (!absl::SimpleAtoi(text, &value)) {
        return ConfigError(where + ": '" + text + "' is not an integer");
      }
      return Json(value);
    }
    case Kind::kDouble: {
      auto value = ParseNumber(text, where);
      if (!value.ok()) return value.status();
      return Json(*value);
    }
    case Kind::kString:
      return Json(text);
    case Kind::kBool:
      if (text == "true" || text == "1") return Json(true);
      if (text == "false" || text == "0") return Json(false);
      return ConfigError(where + ": expected true or false, got '" + text +
                         "'");
    case Kind::kFlag:
      return Json(true);
    case Kind::kDoubles: {
      Json out = Json::array();
      const std::vector<std::string> parts =
          absl::StrSplit(text, ',', absl::SkipWhitespace());
      for (const std::string& part : parts) {
        auto value = ParseNumber(part, where);
        if (!value.ok()) return value.status();
        out.push_back(*value);
      }
      if (out.empty()) return ConfigError(where + ": empty list");
      return out;
    }
  }
  return ConfigError(where + " has an unknown type");
}

// Flag storage of one subcommand.
struct Command {
  Command(std::string name, std::vector<Param> params)
      : name(std::move(name)), params(std::move(params)) {}

  std::string name;
  std::vector<Param> params;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> raw;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  std::string out_dir;

  void Register(CLI::App* parent, const std::string& description) {
    app = parent->add_subcommand(name, description);
    app->add_option("--config", config_path, "JSON config file");
    app->add_option("--out", out_dir,
                    std::string("output directory (default $") + kOutputDirEnv +
                        " or " + kDefaultOutputDir + ")");
    for (const Param& param : params) {
      if (param.kind == Kind::kFlag) {
        options[param.key] =
            app->add_flag(param.flag, flags[param.key], param.help);
      } else {
        options[param.key] =
            app->add_option(param.flag, raw[param.key], param.help);
      }
    }
  }

  // Defaults, then the config file, then explicit flags.
  absl::StatusOr<Json> Resolve() const {
    Json resolved = Json::object();
    for (const Param& param : params) resolved[param.key] = param.fallback;
    if (!config_path.empty()) {
      auto text = ReadFile(config_path);
      if (!text.ok()) return text.status();
      Json file = Json::parse(*text, nullptr, /*allow_exceptions=*/false);
      if (file.is_discarded() || !file.is_object()) {
        return ConfigError(config_path + " is not a JSON object");
      }
      for (const auto& [key, value] : file.items()) {
        if (key == "command") {
          if (value != name) {
            return ConfigError(config_path + " is a config for '" +
                               value.dump() + "', not '" + name + "'");
          }
          continue;
        }
        const Param* param = Find(key);
        if (param == nullptr) {
          return ConfigError("unknown config key '" + key + "' for " + name);
        }
        auto checked = CheckJsonValue(*param, value);
        if (!checked.ok()) return checked.status();
        resolved[key] = *std::move(checked);
      }
    }
    for (const Param& param : params) {
      if (options.at(param.key)->count() == 0) continue;
      auto value = param.kind == Kind::kFlag
                       ? absl::StatusOr<Json>(Json(flags.at(param.key)))
                       : ParseFlagValue(param, raw.at(param.key));
      if (!value.ok()) return value.status();
      resolved[param.key] = *std::move(value);
    }
    return resolved;
  }

  const Param* Find(const std::string& key) const {
    for (const Param& param : params) {
      if (param.key == key) return &param;
    }
    return nullptr;
  }
};

std::string OutputDir(const Command& command) {
  if (!command.out_dir.empty()) return command.out_dir;
  const char* env = std::getenv(kOutputDirEnv);
  if (env != nullptr && *env != '\0') return env;
  return kDefaultOutputDir;
}

absl::Status EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    return IoError("OutputDir", "cannot create " + dir + ": " + ec.message());
  return absl::OkStatus();
}

absl::Status WriteOutput(const std::string& dir, const std::string& name,
                         const std::string& data) {
  return WriteFileAtomic((fs::path(dir) / name).string(), data);
}

std::optional<int> OptionalInt(const Json& value) {
  if (value.is_null()) return std::nullopt;
  return value.get<int>();
}

absl::StatusOr<int> PositiveInt(const Json& config, const std::string& key,
                                int minimum) {
  const auto value = config.at(key).get<std::int64_t>();
  if (value < minimum || value > (1LL << 30)) {
    return ConfigError(
        absl::StrCat(key, " must be at least ", minimum, ", got ", value));
  }
  return static_cast<int>(value);
}

absl::StatusOr<std::uint64_t> Seed(const Json& config, const std::string& key) {
  const auto value = config.at(key).get<std::int64_t>();
  if (value < 0) return ConfigError(absl::StrCat(key, " must be >= 0"));
  return static_cast<std::uint64_t>(value);
}

// Fields common to simulate and bench; m, n, s and seed are set by callers.
absl::StatusOr<SimConfig> GeneratorConfig(const Json& config) {
  SimConfig sim;
  auto t0 = PositiveInt(config, "t0", 1);
  if (!t0.ok()) return t0.status();
  auto t_post = PositiveInt(config, "t_post", 1);
  if (!t_post.ok()) return t_post.status();
  auto ramp = PositiveInt(config, "ramp", 0);
  if (!ramp.ok()) return ramp.status();
  sim.t0 = *t0;
  sim.t_post = *t_post;
  sim.ramp_length = *ramp;
  sim.baseline = config.at("baseline").get<double>();
  sim.ar_coefficient = config.at("phi").get<double>();
  sim.noise_sd = config.at("sigma").get<double>();
  sim.direct_effect = config.at("d").get<double>();
  sim.confounder_strength = config.at("confounder").get<double>();
  sim.seasonal_period = OptionalInt(config.at("seasonal_period"));
  sim.seasonal_amplitude = config.at("seasonal_amplitude").get<double>();
  sim.unit_sd = config.at("unit_sd").get<double>();
  if (!config.at("common_sd").is_null()) {
    sim.common_noise_sd = config.at("common_sd").get<double>();
  }
  return sim;
}

absl::StatusOr<StateSpaceSpec> ModelSpec(const Json& config) {
  StateSpaceSpec spec;
  const std::string trend = config.at("trend").get<std::string>();
  if (trend == "local_level") {
    spec.trend = Trend::kLocalLevel;
  } else if (trend == "local_linear_trend") {
    spec.trend = Trend::kLocalLinearTrend;
  } else {
    return ConfigError(
        "trend must be local_level or local_linear_trend, got '" + trend + "'");
  }
  spec.seasonal_period = OptionalInt(config.at("seasonal_period"));
  spec.use_regression = config.at("regression").get<bool>();
  if (auto status = ValidateSpec(spec); !status.ok()) return status;
  return spec;
}

absl::StatusOr<BootstrapOptions> Bootstrap(const Json& config,
                                           int default_replicates,
                                           std::uint64_t seed) {
  BootstrapOptions options;
  Json with_default = config;
  if (with_default.at("B").is_null()) with_default["B"] = default_replicates;
  auto replicates = PositiveInt(with_default, "B", 1);
  if (!replicates.ok()) return replicates.status();
  auto workers = PositiveInt(config, "workers", 1);
  if (!workers.ok()) return workers.status();
  options.replicates = *replicates;
  options.workers = *workers;
  options.seed = seed;
  options.caliper_sd = config.at("caliper_sd").get<double>();
  if (!(options.caliper_sd > 0.0)) {
    return ConfigError("caliper_sd must be positive");
  }
  options.match_on_pre_mean = config.at("match_on_pre_mean").get<bool>();
  return options;
}

absl::Status RunSimulate(const Json& config, const std::string& out) {
  auto sim = GeneratorConfig(config);
  if (!sim.ok()) return sim.status();
  auto m = PositiveInt(config, "m", 1);
  if (!m.ok()) return m.status();
  auto n = PositiveInt(config, "n", 1);
  if (!n.ok()) return n.status();
  auto seed = Seed(config, "seed");
  if (!seed.ok()) return seed.status();
  sim->m = *m;
  sim->n = *n;
  sim->spillover_effect = config.at("s").get<double>();
  sim->seed = *seed;

  auto experiment = GenerateExperiment(*sim);
  if (!experiment.ok()) return experiment.status();
  const PanelData& panel = experiment->panel;
  if (auto s = WriteOutput(out, "panel.csv", FormatOutcomesCsv(panel));
      !s.ok()) {
    return s;
  }
  if (panel.num_features() > 0) {
    if (auto s = WriteOutput(out, "features.csv", FormatFeaturesCsv(panel));
        !s.ok()) {
      return s;
    }
  }
  return WriteOutput(out, "truth.json",
                     DumpJson(TruthToJson(experiment->truth)));
}

Json PanelSummary(const PanelData& panel) {
  return {{"num_units", panel.num_units()},
          {"num_treated", panel.num_treated()},
          {"num_periods", panel.num_periods()},
          {"num_features", panel.num_features()},
          {"t0", panel.t0}};
}

absl::Status RunAnalyze(const Json& config, const std::string& out) {
  if (config.at("method").is_null()) {
    return ConfigError("analyze needs a method: ancova, match, impact, sports");
  }
  const std::string method = config.at("method").get<std::string>();
  if (method != "ancova" && method != "match" && method != "impact" &&
      method != "sports") {
    return ConfigError("unknown method '" + method +
                       "'; expected ancova, match, impact or sports");
  }
  if (config.at("panel").is_null()) return ConfigError("--panel is required");
  if (config.at("t0").is_null()) return ConfigError("--t0 is required");
  const bool dump_model = config.at("dump_model").get<bool>();
  if (dump_model && (method == "ancova" || method == "match")) {
    return ConfigError("--dump-model applies to impact and sports only");
  }
  auto spec = ModelSpec(config);
  if (!spec.ok()) return spec.status();
  auto seed = Seed(config, "seed");
  if (!seed.ok()) return seed.status();
  auto bootstrap = Bootstrap(config, kDefaultBootstrapReplicates, *seed);
  if (!bootstrap.ok()) return bootstrap.status();
  auto ar_max_order = PositiveInt(config, "ar_max_order", 0);
  if (!ar_max_order.ok()) return ar_max_order.status();

  std::optional<std::string> features;
  if (!config.at("features").is_null()) {
    features = config.at("features").get<std::string>();
  }
  auto panel = LoadPanel(config.at("panel").get<std::string>(), features,
                         config.at("t0").get<int>());
  if (!panel.ok()) return panel.status();
  const GroupSeries observed = AggregateGroups(*panel);

  Json result = {{"method", method}, {"panel", PanelSummary(*panel)}};
  Json model;
  SeriesTable table = ObservedSeries(observed);
  if (method == "ancova") {
    auto estimate = Ancova(*panel);
    if (!estimate.ok()) return estimate.status();
    result["estimate"] = EstimateToJson(*estimate);
  } else if (method == "match") {
    auto summary = BootstrapMatchingEstimate(*panel, *bootstrap);
    if (!summary.ok()) return summary.status();
    result["estimate"] =
        EstimateToJson(SummaryEstimate(*summary, Method::kBootstrapMatching));
    result["bootstrap"] = BootstrapToJson(*summary);
  } else if (method == "impact") {
    auto impact = CausalImpact(observed, *spec);
    if (!impact.ok()) return impact.status();
    result["estimate"] = EstimateToJson(impact->estimate);
    result["impact"] = ImpactToJson(*impact);
    model = {{"impact", FitToJson(impact->fit)}};
    table = ImpactSeries(observed, *impact);
  } else {
    SportsOptions options;
    options.spec = *spec;
    options.ar_max_order = *ar_max_order;
    options.bootstrap = *bootstrap;
    auto sports = SportsCausal(*panel, options);
    if (!sports.ok()) return sports.status();
    Json body = SportsToJson(*sports);
    for (auto& [key, value] : body.items()) result[key] = value;
    model = {{"vanilla", FitToJson(sports->vanilla.fit)},
             {"corrected", FitToJson(sports->corrected.fit)},
             {"aggregate_ar", ArModelToJson(sports->aggregate_model)}};
    table = SportsSeries(observed, *sports);
  }

  if (auto s = WriteOutput(out, "result.json", DumpJson(result)); !s.ok()) {
    return s;
  }
  if (auto s = WriteOutput(out, "series.csv", FormatSeriesCsv(table));
      !s.ok()) {
    return s;
  }
  if (auto s = WriteOutput(out, "impact.svg",
                           RenderImpactSvg(table, "sportscausal " + method));
      !s.ok()) {
    return s;
  }
  if (dump_model) return WriteOutput(out, "model.json", DumpJson(model));
  return absl::OkStatus();
}

double Mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double StdDev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct BenchCell {
  double fraction = 0.0;
  std::uint64_t seed = 0;
  SimTruth truth;
  PanelData panel;
  double vanilla = 0.0;
  double corrected = 0.0;
  absl::Status status;
};

absl::Status RunBench(const Json& config, const std::string& out) {
  auto base = GeneratorConfig(config);
  if (!base.ok()) return base.status();
  auto total = PositiveInt(config, "N", 2);
  if (!total.ok()) return total.status();
  auto seeds = PositiveInt(config, "seeds", 1);
  if (!seeds.ok()) return seeds.status();
  auto first_seed = Seed(config, "first_seed");
  if (!first_seed.ok()) return first_seed.status();
  auto spec = ModelSpec(config);
  if (!spec.ok()) return spec.status();
  auto bootstrap = Bootstrap(config, 1, 0);
  if (!bootstrap.ok()) return bootstrap.status();
  auto ar_max_order = PositiveInt(config, "ar_max_order", 0);
  if (!ar_max_order.ok()) return ar_max_order.status();
  const double lambda = config.at("lambda").get<double>();
  const std::vector<double> fractions =
      config.at("fractions").get<std::vector<double>>();
  base->m = *total / 2;
  base->n = *total - base->m;

  // Cells ordered by fraction, then seed.
  std::vector<BenchCell> cells(fractions.size() * *seeds);
  for (int j = 0; j < *seeds; ++j) {
    SimConfig config_j = *base;
    config_j.seed = *first_seed + j;
    auto sweep = FractionSweep(config_j, fractions, lambda);
    if (!sweep.ok()) return sweep.status();
    for (size_t k = 0; k < sweep->size(); ++k) {
      BenchCell& cell = cells[k * *seeds + j];
      cell.fraction = (*sweep)[k].fraction;
      cell.seed = config_j.seed;
      cell.truth = (*sweep)[k].experiment.truth;
      cell.panel = std::move((*sweep)[k].experiment.panel);
    }
  }

  const std::string cell_dir = (fs::path(out) / "cells").string();
  if (auto s = EnsureDir(cell_dir); !s.ok()) return s;
  SportsOptions options;
  options.spec = *spec;
  options.ar_max_order = *ar_max_order;
  options.bootstrap = *bootstrap;
  options.bootstrap.workers = 1;
  ParallelFor(static_cast<int>(cells.size()), bootstrap->workers, [&](int i) {
    BenchCell& cell = cells[i];
    SportsOptions cell_options = options;
    cell_options.bootstrap.seed = cell.seed;
    auto result = SportsCausal(cell.panel, cell_options);
    if (!result.ok()) {
      cell.status = result.status();
      return;
    }
    cell.vanilla = result->vanilla.estimate.effect;
    cell.corrected = result->bootstrap ? result->bootstrap->mean_effect
                                       : result->corrected.estimate.effect;
    Json record = SportsToJson(*result);
    record["fraction"] = cell.fraction;
    record["seed"] = cell.seed;
    record["truth"] = TruthToJson(cell.truth);
    cell.status = WriteOutput(
        cell_dir,
        absl::StrCat("cell_", i / *seeds, "_seed", cell.seed, ".json"),
        DumpJson(record));
    cell.panel = PanelData();
  });
  for (const BenchCell& cell : cells) {
    if (!cell.status.ok()) return cell.status;
  }

  std::string csv = "fraction,seed,vanilla_effect,corrected_effect,truth\n";
  for (const BenchCell& cell : cells) {
    csv += FormatDouble(cell.fraction) + "," + std::to_string(cell.seed) + "," +
           FormatDouble(cell.vanilla) + "," + FormatDouble(cell.corrected) +
           "," + FormatDouble(cell.truth.direct_effect) + "\n";
  }
  std::string summary_csv =
      "fraction,cells,n,m,spillover_effect,vanilla_mean,vanilla_sd,"
      "corrected_mean,corrected_sd,truth\n";
  Json summary = Json::array();
  for (size_t k = 0; k < fractions.size(); ++k) {
    std::vector<double> vanilla, corrected;
    for (int j = 0; j < *seeds; ++j) {
      vanilla.push_back(cells[k * *seeds + j].vanilla);
      corrected.push_back(cells[k * *seeds + j].corrected);
    }
    const SimTruth& truth = cells[k * *seeds].truth;
    summary.push_back({{"fraction", fractions[k]},
                       {"cells", *seeds},
                       {"n", truth.n},
                       {"m", truth.m},
                       {"spillover_effect", truth.spillover_effect},
                       {"vanilla_mean", Mean(vanilla)},
                       {"vanilla_sd", StdDev(vanilla)},
                       {"corrected_mean", Mean(corrected)},
                       {"corrected_sd", StdDev(corrected)},
                       {"truth", truth.direct_effect}});
    summary_csv +=
        FormatDouble(fractions[k]) + "," + std::to_string(*seeds) + "," +
        std::to_string(truth.n) + "," + std::to_string(truth.m) + "," +
        FormatDouble(truth.spillover_effect) + "," +
        FormatDouble(Mean(vanilla)) + "," + FormatDouble(StdDev(vanilla)) +
        "," + FormatDouble(Mean(corrected)) + "," +
        FormatDouble(StdDev(corrected)) + "," +
        FormatDouble(truth.direct_effect) + "\n";
  }
  if (auto s = WriteOutput(out, "bench.csv", csv); !s.ok()) return s;
  if (auto s = WriteOutput(out, "summary.csv", summary_csv); !s.ok()) return s;
  return WriteOutput(out, "result.json",
                     DumpJson({{"command", "bench"}, {"summary", summary}}));
}

void ReportError(const absl::Status& status, const std::string& out) {
  const int code = ExitCodeFor(status);
  std::cerr << "sportscausal: " << status.message() << "\n";
  if (out.empty() || !EnsureDir(out).ok()) return;
  const Json error = {{"error",
                       {{"kind", ErrorKind(status)},
                        {"code", absl::StatusCodeToString(status.code())},
                        {"message", std::string(status.message())},
                        {"exit_code", code}}}};
  (void)WriteOutput(out, "error.json", DumpJson(error));
}

}  // namespace

int RunMain(int argc, char** argv) {
  CLI::App app{"Spillover-aware treatment effect estimation", "sportscausal"};
  app.require_subcommand(1);
  Command simulate{"simulate", SimulateParams()};
  Command analyze{"analyze", AnalyzeParams()};
  Command bench{"bench", BenchParams()};
  simulate.Register(&app, "generate a synthetic experiment panel");
  analyze.Register(&app, "estimate the treatment effect of a panel");
  bench.Register(&app, "sweep treated fractions and seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Command* command = nullptr;
  for (Command* c : {&simulate, &analyze, &bench}) {
    if (c->app->parsed()) command = c;
  }
  const std::string out = OutputDir(*command);
  absl::Status status = EnsureDir(out);
  absl::StatusOr<Json> config = Json();
  if (status.ok()) {
    config = command->Resolve();
    status = config.status();
  }
  if (status.ok()) {
    Json echo = *config;
    echo["command"] = command->name;
    status = WriteOutput(out, "config.resolved.json", DumpJson(echo));
  }
  if (status.ok()) {
    try {
      if (command == &simulate) {
        status = RunSimulate(*config, out);
      } else if (command == &analyze) {
        status = RunAnalyze(*config, out);
      } else {
        status = RunBench(*config, out);
      }
    } catch (const Json::exception& e) {
      status = ConfigError(e.what());
    }
  }
  if (!status.ok()) {
    ReportError(status, out);
    return ExitCodeFor(status);
  }
  return 0;
}

int RunMain(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  argv.reserve(args.size() + 1);
  for (const std::string& arg : args)
    argv.push_back(const_cast<char*>(arg.c_str()));
  argv.push_back(nullptr);
  return RunMain(static_cast<int>(args.size()), argv.data());
}

}  // namespace sportscausal
