// Copyright 2026 The squidsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Self-contained SVG rendering of simulation results: population
// heatmaps, level diagrams with resonance markers, and step-curve
// overlays. Output is plain deterministic text (no timestamps).

#include <string>
#include <vector>

#include "squidsim/spectrum.hpp"
#include "squidsim/sweep.hpp"

namespace squidsim {

enum class PlotKind { Heatmap, Lines };

/// Axis labels and color-scale bounds for a rendered plot.
struct PlotSpec {
  PlotKind kind = PlotKind::Heatmap;
  std::string x_label;
  std::string y_label;
  double color_min = 0.0;  ///< heatmap scale bounds, ordered
  double color_max = 1.0;
};

/// Throws ValidationError unless color_min < color_max.
void validate(const PlotSpec& spec);

PlotSpec default_heatmap_spec();
PlotSpec default_levels_spec();
PlotSpec default_scan_spec();

/// Heatmap of a sweep grid: bias on y, power on x, colorbar on the
/// right. Failed (NaN) cells render gray.
std::string heatmap_svg(const SweepGrid& grid, const std::string& title,
                        const std::string& hash = "",
                        const PlotSpec& spec = default_heatmap_spec());

/// Level diagram: one polyline per eigenlevel (colored by dominant
/// side), dashed vertical markers at the given resonance biases labeled
/// with the photon number.
std::string levels_svg(const LevelDiagram& d,
                       const std::vector<Resonance>& resonances,
                       const std::string& title, const std::string& hash = "",
                       const PlotSpec& spec = default_levels_spec());

/// Step-curve overlay: the no-MW baseline (dots) and, optionally, the
/// driven curve (line) on the same bias axis.
std::string scan_svg(const BiasScan& baseline, const BiasScan* with_mw,
                     const std::string& title, const std::string& hash = "",
                     const PlotSpec& spec = default_scan_spec());

}  // namespace squidsim
