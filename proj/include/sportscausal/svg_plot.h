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
#ifndef SPORTSCAUSAL_SVG_PLOT_H_
#define SPORTSCAUSAL_SVG_PLOT_H_

#include <string>
#include <string_view>

#include "sportscausal/report.h"

namespace sportscausal {

// Static three-panel SVG: observed series against the counterfactual, the
// pointwise effect and the cumulative effect. Treated is red, control blue,
// predicted control black; the counterfactual is a grey dashed line over its
// 95% band. Effect panels are left empty when the table has no
// counterfactual.
std::string RenderImpactSvg(const SeriesTable& table, std::string_view title);

}  // namespace sportscausal

#endif  // SPORTSCAUSAL_SVG_PLOT_H_
