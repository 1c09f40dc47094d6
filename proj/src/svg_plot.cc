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
#include "sportscausal/svg_plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <vector>

namespace sportscausal {
namespace {

constexpr double kWidth = 820.0;
constexpr double kPanelHeight = 220.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kGap = 30.0;
constexpr double kZ95 = 1.959963984540054;

std::string Num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

std::string Label(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4g", v);
  return buffer;
}

std::string Escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

// A sampled curve: (period index, value) pairs.
using Curve = std::vector<std::pair<int, double>>;

class Panel {
 public:
  Panel(int index, int periods, std::string title)
      : top_(kTop + index * (kPanelHeight + kGap)),
        periods_(periods),
        title_(std::move(title)) {}

  void Extend(const Curve& curve) {
    for (const auto& [t, v] : curve) {
      if (!std::isfinite(v)) continue;
      lo_ = std::min(lo_, v);
      hi_ = std::max(hi_, v);
    }
  }

  double X(double t) const {
    const double span = std::max(1, periods_ - 1);
    return kLeft + (kWidth - kLeft - kRight) * t / span;
  }

  double Y(double v) const {
    double lo = lo_, hi = hi_;
    if (!(lo <= hi)) lo = -1.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 1.0, hi += 1.0;
    return top_ + kPanelHeight * (hi - v) / (hi - lo);
  }

  std::string Frame(int t0) const {
    std::string out = "<g>\n";
    out += "<rect x=\"" + Num(kLeft) + "\" y=\"" + Num(top_) + "\" width=\"" +
           Num(kWidth - kLeft - kRight) + "\" height=\"" + Num(kPanelHeight) +
           "\" fill=\"none\" stroke=\"#888\"/>\n";
    out += "<text x=\"" + Num(kLeft) + "\" y=\"" + Num(top_ - 6) +
           "\" font-size=\"12\">" + Escape(title_) + "</text>\n";
    if (lo_ <= hi_) {
      out += "<text x=\"" + Num(kLeft - 6) + "\" y=\"" + Num(top_ + 10) +
             "\" font-size=\"10\" text-anchor=\"end\">" + Label(hi_) +
             "</text>\n";
      out +=
          "<text x=\"" + Num(kLeft - 6) + "\" y=\"" + Num(top_ + kPanelHeight) +
          "\" font-size=\"10\" text-anchor=\"end\">" + Label(lo_) + "</text>\n";
    }
    const double x0 = X(t0 - 0.5);
    out += "<line x1=\"" + Num(x0) + "\" y1=\"" + Num(top_) + "\" x2=\"" +
           Num(x0) + "\" y2=\"" + Num(top_ + kPanelHeight) +
           "\" stroke=\"#444\" stroke-dasharray=\"2,3\"/>\n";
    out += "</g>\n";
    return out;
  }

  std::string Line(const Curve& curve, std::string_view color,
                   bool dashed = false) const {
    if (curve.empty()) return "";
    std::string points;
    for (const auto& [t, v] : curve) {
      if (!points.empty()) points += " ";
      points += Num(X(t)) + "," + Num(Y(v));
    }
    std::string out = "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                      "\" stroke-width=\"1.5\"";
    if (dashed) out += " stroke-dasharray=\"5,3\"";
    return out + " points=\"" + points + "\"/>\n";
  }

  std::string Band(const Curve& lower, const Curve& upper) const {
    if (lower.empty()) return "";
    std::string points;
    for (const auto& [t, v] : lower)
      points += Num(X(t)) + "," + Num(Y(v)) + " ";
    for (auto it = upper.rbegin(); it != upper.rend(); ++it) {
      points += Num(X(it->first)) + "," + Num(Y(it->second)) + " ";
    }
    points.pop_back();
    return "<polygon fill=\"#bbb\" fill-opacity=\"0.4\" stroke=\"none\" "
           "points=\"" +
           points + "\"/>\n";
  }

  std::string ZeroLine() const {
    if (!(lo_ <= 0.0 && hi_ >= 0.0)) return "";
    return "<line x1=\"" + Num(kLeft) + "\" y1=\"" + Num(Y(0.0)) + "\" x2=\"" +
           Num(kWidth - kRight) + "\" y2=\"" + Num(Y(0.0)) +
           "\" stroke=\"#888\"/>\n";
  }

 private:
  double top_;
  int periods_;
  std::string title_;
  double lo_ = std::numeric_limits<double>::infinity();
  double hi_ = -std::numeric_limits<double>::infinity();
};

Curve Whole(const std::vector<double>& values) {
  Curve curve;
  for (size_t t = 0; t < values.size(); ++t) {
    curve.emplace_back(static_cast<int>(t), values[t]);
  }
  return curve;
}

Curve Post(const std::vector<double>& values, int t0) {
  Curve curve;
  for (size_t h = 0; h < values.size(); ++h) {
    curve.emplace_back(t0 + static_cast<int>(h), values[h]);
  }
  return curve;
}

}  // namespace

std::string RenderImpactSvg(const SeriesTable& table, std::string_view title) {
  const int periods = static_cast<int>(table.treated.size());
  const int t0 = table.t0;
  const double height = kTop + 3 * kPanelHeight + 2 * kGap + 30.0;

  Panel observed(0, periods, "observed and counterfactual");
  Panel pointwise(1, periods, "pointwise effect");
  Panel cumulative(2, periods, "cumulative effect");

  const Curve treated = Whole(table.treated);
  const Curve control = Whole(table.control);
  observed.Extend(treated);
  observed.Extend(control);

  Curve predicted, mean, lower, upper, effect, effect_lower, effect_upper,
      total;
  if (table.predicted_control) {
    predicted = Post(std::vector<double>(table.predicted_control->begin() + t0,
                                         table.predicted_control->end()),
                     t0);
    observed.Extend(predicted);
  }
  if (table.counterfactual) {
    const Forecast& cf = *table.counterfactual;
    double running = 0.0;
    for (size_t h = 0; h < cf.mean.size(); ++h) {
      const int t = t0 + static_cast<int>(h);
      if (t >= periods) break;
      const double sd = std::sqrt(cf.variance[h]);
      mean.emplace_back(t, cf.mean[h]);
      lower.emplace_back(t, cf.mean[h] - kZ95 * sd);
      upper.emplace_back(t, cf.mean[h] + kZ95 * sd);
      const double e = table.treated[t] - cf.mean[h];
      effect.emplace_back(t, e);
      effect_lower.emplace_back(t, e - kZ95 * sd);
      effect_upper.emplace_back(t, e + kZ95 * sd);
      running += e;
      total.emplace_back(t, running);
    }
    observed.Extend(lower);
    observed.Extend(upper);
    pointwise.Extend(effect_lower);
    pointwise.Extend(effect_upper);
    cumulative.Extend(total);
  }
  pointwise.Extend({{0, 0.0}});
  cumulative.Extend({{0, 0.0}});

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    Num(kWidth) + "\" height=\"" + Num(height) +
                    "\" viewBox=\"0 0 " + Num(kWidth) + " " + Num(height) +
                    "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + Num(kLeft) + "\" y=\"18\" font-size=\"14\">" +
         Escape(title) + "</text>\n";

  svg += observed.Frame(t0);
  svg += observed.Band(lower, upper);
  svg += observed.Line(control, "blue");
  svg += observed.Line(treated, "red");
  svg += observed.Line(predicted, "black");
  svg += observed.Line(mean, "#555", /*dashed=*/true);

  svg += pointwise.Frame(t0);
  svg += pointwise.Band(effect_lower, effect_upper);
  svg += pointwise.ZeroLine();
  svg += pointwise.Line(effect, "#555", /*dashed=*/true);

  svg += cumulative.Frame(t0);
  svg += cumulative.ZeroLine();
  svg += cumulative.Line(total, "#555", /*dashed=*/true);

  const double legend_y = height - 10.0;
  const struct {
    const char* color;
    const char* name;
  } legend[] = {{"red", "treated"},
                {"blue", "control"},
                {"black", "predicted control"},
                {"#555", "counterfactual"}};
  double x = kLeft;
  for (const auto& item : legend) {
    svg += "<line x1=\"" + Num(x) + "\" y1=\"" + Num(legend_y - 4) +
           "\" x2=\"" + Num(x + 20) + "\" y2=\"" + Num(legend_y - 4) +
           "\" stroke=\"" + item.color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + Num(x + 25) + "\" y=\"" + Num(legend_y) +
           "\" font-size=\"11\">" + item.name + "</text>\n";
    x += 150.0;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sportscausal
