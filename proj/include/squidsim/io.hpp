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

// Deterministic serialization: CSV with 9 significant digits, '\n' line
// endings and a '# key = value' comment header carrying the config hash;
// JSON documents through nlohmann::ordered_json.

#include <json.hpp>
#include <string>

#include "squidsim/dynamics.hpp"
#include "squidsim/spectrum.hpp"
#include "squidsim/sweep.hpp"

namespace squidsim {

using ordered_json = nlohmann::ordered_json;

/// %.9g rendering used by every CSV writer.
std::string format_number(double v);

/// Columns: bias, level_index, energy_GHz, side, intrawell_index.
std::string diagram_to_csv(const LevelDiagram& d,
                           const std::string& hash = "");

/// Columns: t_ns, p_right, p_1R, p_1L, p_0R, p_0L, purity.
std::string trajectory_to_csv(const Trajectory& t,
                              const std::string& hash = "");

/// Columns: bias, p_right_no_mw[, p_right_mw].
std::string scan_to_csv(const BiasScan& base, const BiasScan* with_mw,
                        const std::string& hash = "");

/// Header row of power values, first column bias values.
std::string grid_to_csv(const SweepGrid& g, const std::string& hash = "");

ordered_json model_to_json(const FourLevelModel& m);
ordered_json grid_to_json(const SweepGrid& g, const std::string& hash,
                          const std::string& config_echo);
ordered_json report_to_json(const FeatureReport& r, const std::string& hash);

/// Writes text to path, creating parent directories. Throws Error on
/// filesystem failure.
void write_file(const std::string& path, const std::string& text);

std::string read_file(const std::string& path);

}  // namespace squidsim
