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

// Experiment-shaped scans: the no-MW bias step curve, 2D bias x power
// population maps, binomial shot-noise emulation, and detection of
// peaks, dips and population-inversion regions.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "squidsim/dynamics.hpp"
#include "squidsim/spectrum.hpp"
#include "squidsim/threads.hpp"

namespace squidsim {

/// Map from nominal source power to on-chip flux amplitude. The paper
/// reports only nominal dBm; the reference amplitude is a free
/// calibration input, not a measured value.
struct PowerCalibration {
  double p_ref_dbm = -20.0;  ///< nominal power of the reference point
  double phi_rf_ref = 1e-3;  ///< flux amplitude at p_ref [Phi0]
};

/// phi_rf_ref * 10^((p - p_ref) / 20).
double power_to_amplitude(double p_dbm, const PowerCalibration& cal);

enum class SweepSolver { FullDynamics, RateEquation };

const char* to_string(SweepSolver s);

struct SweepSpec {
  double bias_min = 0.485;  ///< [Phi0]
  double bias_max = 0.515;
  int n_bias = 61;
  double p_min = -20.0;     ///< [dBm]
  double p_max = 10.0;
  int n_power = 21;
  double f = 15.9;          ///< drive frequency [GHz]
  SweepSolver solver = SweepSolver::RateEquation;
  double duration = 200.0;  ///< full-dynamics cell duration [ns]
  long shots = 0;           ///< binomial trials per cell; 0 = noise-free
};

void validate(const SweepSpec& s);

/// Ground-state right-well population versus bias, no microwaves.
struct BiasScan {
  std::vector<double> bias;
  std::vector<double> p_right;
};

/// P = 1 where the static ground state sits in the right well, 0 in the
/// left, 0.5 at degeneracy (within one bias grid step of 0.5 Phi0).
/// A precomputed diagram over the same bias axis is reused when given.
BiasScan bias_scan_no_mw(const CircuitParams& p, const SweepSpec& spec,
                         const LevelDiagram* diagram = nullptr);

/// Population map over (bias, power). Failed cells carry NaN and a
/// cause string; they are reported, never interpolated.
struct SweepGrid {
  std::vector<double> bias;              ///< row axis [Phi0]
  std::vector<double> power;             ///< column axis [dBm]
  Eigen::MatrixXd values;                ///< n_bias x n_power, NaN = failed
  std::vector<std::string> provenance;   ///< per cell, row-major
  std::vector<std::string> failures;     ///< "i,j: cause" entries
  std::string solver_name;
  long shots = 0;
  std::uint64_t noise_seed = 0;
  bool noisy = false;

  const std::string& cell_provenance(int i, int j) const {
    return provenance[static_cast<size_t>(i) * power.size() + j];
  }
};

/// Extracts the four-level model from a level diagram over the sweep's
/// bias axis, re-references it per bias, and fills every cell with the
/// chosen solver. Cells are independent; evaluation is parallel (capped
/// by SQUIDSIM_THREADS) with deterministic assembly. A precomputed
/// diagram over the same axis is reused when given.
SweepGrid run_sweep(const CircuitParams& p, const SweepSpec& spec,
                    const PowerCalibration& cal, const DecoherenceRates& r,
                    const LevelDiagram* diagram = nullptr);

/// Replaces each cell by a binomial sample mean (count = shots) from a
/// generator keyed by (seed, cell index); bit-deterministic.
SweepGrid add_shot_noise(const SweepGrid& grid, long shots,
                         std::uint64_t seed);

/// A population extremum along bias exceeding the no-MW baseline by the
/// detection threshold, with the photon number of the nearest predicted
/// resonance when one lies within two grid steps.
struct Feature {
  double bias;
  double power;
  double population;
  std::optional<int> photon_n;
};

/// Cell whose excited-well population exceeds 1/2 (ground side from the
/// no-MW baseline).
struct InversionCell {
  double bias;
  double power;
  double population;       ///< population of the excited well
  WellSide ground_side;    ///< static ground side (the depleted well)
};

struct FeatureReport {
  std::vector<Feature> peaks;
  std::vector<Feature> dips;
  std::vector<InversionCell> inversions;
};

/// Peak/dip threshold above/below baseline.
inline constexpr double kFeatureThreshold = 0.1;

FeatureReport detect_features(const SweepGrid& grid, const BiasScan& baseline,
                              const LevelDiagram& diagram, double f);

}  // namespace squidsim
