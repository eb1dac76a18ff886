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

// Built-in verification checks behind the `verify` command: closed-form
// oracles exercised against the numerical machinery.

#include <string>
#include <vector>

namespace squidsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Direct numerical two-level sweep: integrates the Schrodinger equation
/// through one avoided crossing (half-gap and detuning velocity in
/// angular units) and returns the diabatic survival probability.
/// Independent of lz_probability; used as its oracle.
double lz_survival_numeric(double delta_angular, double rate_angular);

/// beta_L = 0 spectrum versus the analytic oscillator spacing.
CheckResult check_harmonic_limit();

/// lz_probability against lz_survival_numeric. full_grid runs the whole
/// 4x4 (delta, rate) matrix; otherwise a 2x2 corner subset.
CheckResult check_lz_oracle(bool full_grid);

/// Trace / Hermiticity / positivity of a driven dissipative trajectory
/// on reference-device parameters.
CheckResult check_trace_preservation();

/// Synthetic-diagram round trip through extract_four_level_model.
CheckResult check_round_trip_extraction();

std::vector<CheckResult> run_all_checks();

}  // namespace squidsim
