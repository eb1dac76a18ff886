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

// Command implementations behind the squidsim CLI. Each command writes
// its deterministic output files under cfg.out_dir and returns a process
// exit code.

#include "squidsim/config.hpp"

namespace squidsim {

/// Level diagram + four-level model: levels.csv, model.json, levels.svg.
int cmd_levels(const RunConfig& cfg);

/// No-MW step curve with a single-power overlay at the calibration
/// reference power: scan.csv, scan.svg.
int cmd_scan(const RunConfig& cfg);

/// 2D bias x power map (+ optional shot noise) and feature detection:
/// grid.csv, grid.json, features.json, sweep.svg.
int cmd_sweep(const RunConfig& cfg);

/// Built-in verification checks; prints a pass/fail table, exit 0 iff
/// all pass.
int cmd_verify(const RunConfig& cfg);

}  // namespace squidsim
