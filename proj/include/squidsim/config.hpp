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

// Run configuration: INI-style sections of key = value lines, defaults
// from the reference device (L = 1080 pH, C = 80 pF, beta_L = 1.39,
// f = 15.9 GHz) and validation of every physical invariant on load.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "squidsim/circuit.hpp"
#include "squidsim/dynamics.hpp"
#include "squidsim/sweep.hpp"

namespace squidsim {

struct RunConfig {
  // [circuit]  exactly one of ic_ua / beta_l may be set; the other is derived
  double l_ph = 1080.0;
  double c_pf = 80.0;
  std::optional<double> ic_ua;
  std::optional<double> beta_l_cfg;
  double phi_cjj = 0.0;

  // [drive]
  double f_ghz = 15.9;
  double drive_duration_ns = 1000.0;

  // [rates]
  DecoherenceRates rates{};

  // [calibration]
  PowerCalibration calibration{};

  // [sweep]
  SweepSpec sweep{};
  std::uint64_t seed = 12345;

  // [output]
  std::string out_dir = "out";
  bool write_csv = true;
  bool write_json = true;
  bool write_svg = true;

  /// Non-fatal consistency notes collected while loading (for example an
  /// LC frequency far below the drive frequency).
  std::vector<std::string> warnings;

  /// Circuit parameters in SI units; Ic derived from beta_L when the
  /// config specifies the latter.
  CircuitParams circuit() const;
};

/// Parses and validates a config file. ParseError carries the offending
/// line number; ValidationError names the violated invariant.
RunConfig load_config(const std::string& path);

/// Same, from an in-memory string (origin names the source in errors).
RunConfig parse_config(const std::string& text,
                       const std::string& origin = "<string>");

/// Canonical INI rendering of the effective configuration.
std::string render_effective(const RunConfig& cfg);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(std::string_view data);

/// Hash of the canonical effective config, as 16 hex digits. Embedded in
/// every output file.
std::string config_hash(const RunConfig& cfg);

}  // namespace squidsim
