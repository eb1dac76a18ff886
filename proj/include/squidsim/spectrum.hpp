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

// Stationary 1D Schrodinger solver for a particle of mass C in the
// rf-SQUID potential, well classification of eigenstates, the level
// diagram versus flux bias, and extraction of the four-level diabatic
// model that drives the dynamics module.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "squidsim/circuit.hpp"

namespace squidsim {

/// Flux-grid specification for the finite-difference eigensolver.
struct EigenGridSpec {
  double phi_min;      ///< window start [Phi0]
  double phi_max;      ///< window end [Phi0]
  int n_points = 0;    ///< interior grid points (>= 201)
  int n_levels = 8;    ///< eigenpairs to compute (<= n_points / 10)
};

/// Grid with the default window ([bias extent] +- 0.35 Phi0) and a
/// resolution that passes the doubling convergence check for both the
/// pF- and fF-scale capacitance regimes.
EigenGridSpec default_grid(double bias_min, double bias_max,
                           int n_levels = 8);

/// Same window, with the resolution adapted to the shortest local
/// wavelength of the requested level ladder for this device.
EigenGridSpec default_grid(const CircuitParams& p, double bias_min,
                           double bias_max, int n_levels);

/// Levels needed for a diagram to expose every n-photon interwell
/// resonance up to n_max at drive frequency f_drive: the level ladder
/// must span n_max * f_drive above the ground state, so the count
/// scales with the inverse intrawell spacing.
int recommended_levels(const CircuitParams& p, double f_drive, int n_max = 3);

enum class WellSide { Left, Right, Delocalized };

const char* to_string(WellSide s);

/// Well assignment of an eigenstate. side == Delocalized iff the
/// probability weight left of the barrier lies in [0.25, 0.75];
/// intrawell_index counts energy order within each side.
struct WellLabel {
  WellSide side = WellSide::Delocalized;
  int intrawell_index = 0;
};

/// Eigenpairs of the finite-difference Hamiltonian on a flux grid.
/// Wavefunctions are normalized so that sum |psi|^2 dphi = 1.
struct EnergySpectrum {
  std::vector<double> phi;                     ///< grid points [Phi0]
  double dphi = 0.0;                           ///< grid spacing [Phi0]
  std::vector<double> energies;                ///< E/h [GHz], ascending
  std::vector<Eigen::VectorXd> wavefunctions;  ///< one per level
  std::vector<double> left_weight;             ///< filled by classify_states
  std::vector<WellLabel> labels;               ///< filled by classify_states
};

/// Lowest g.n_levels eigenpairs of -(hbar^2 / 2C) d^2/dPhi^2 + U(Phi)
/// with hard-wall boundaries, energies as E/h in GHz.
///
/// When check_convergence is set, the solve is repeated at twice the
/// resolution and GridTooCoarse is thrown if any requested level moves
/// by more than 1e-3 GHz.
EnergySpectrum solve_eigen(const CircuitParams& p, const EigenGridSpec& g,
                           bool check_convergence = true);

/// Labels each level by the probability weight left of w.barrier_top:
/// Left above 0.75, Right below 0.25, Delocalized otherwise.
EnergySpectrum classify_states(EnergySpectrum s, const WellGeometry& w);

/// Spectra on a strictly increasing bias axis, uniformly classified.
struct LevelDiagram {
  std::vector<double> biases;           ///< [Phi0]
  std::vector<EnergySpectrum> spectra;  ///< one per bias, labeled
};

/// Solves and classifies the spectrum at n_bias equally spaced biases.
/// Eigensolver errors are rethrown with the offending bias attached.
LevelDiagram level_diagram(CircuitParams p, double bias_min, double bias_max,
                           int n_bias, const EigenGridSpec& g,
                           bool check_convergence = true);

/// Diabatic basis order used by the four-level model and the dynamics
/// module: {|1R>, |1L>, |0R>, |0L>}.
enum DiabaticIndex { kState1R = 0, kState1L = 1, kState0R = 2, kState0L = 3 };

/// Diabatic four-level model: energies and slopes of the well-localized
/// branches plus the interwell tunneling splittings (all half-gaps).
struct FourLevelModel {
  std::array<double, 4> energy0{};  ///< E_x0 [GHz] at reference_bias
  std::array<double, 4> slope{};    ///< k_x = dE_x/dphi_q [GHz / Phi0]
  double delta00 = 0.0;             ///< |0R> <-> |0L> splitting [GHz]
  double delta01 = 0.0;             ///< |0> <-> |1> interwell splitting [GHz]
  double delta11 = 0.0;             ///< |1R> <-> |1L> splitting [GHz]
  double reference_bias = 0.5;      ///< [Phi0]
};

/// Same model re-referenced to another bias: E_x0' = E_x0 + k_x (b - b0).
FourLevelModel model_at_bias(const FourLevelModel& m, double bias);

/// Fits the diabatic branch lines (localization weight > 0.9, excluding
/// +-3 grid steps around each avoided crossing) and reads each Delta_ij
/// as half the minimal adiabatic gap at the corresponding crossing.
///
/// Throws NoCrossingFound when a requested gap minimum is absent or sits
/// on the diagram edge, BranchAmbiguity when a branch has too few
/// localized points to fit.
FourLevelModel extract_four_level_model(
    const LevelDiagram& d, std::optional<double> reference_bias = {});

/// An n-photon resonance: the (sorted) level pair whose spacing equals
/// n * f_drive at this bias.
struct Resonance {
  double bias;      ///< [Phi0]
  int n;            ///< photon number
  int level_lower;  ///< eigenlevel index
  int level_upper;  ///< eigenlevel index
};

/// All biases where an interwell level spacing equals n * f_drive for
/// n = 1..n_max, located by a sign-change scan with linear interpolation.
/// Pairs must be localized in opposite wells at the crossing bias.
std::vector<Resonance> predict_resonances(const LevelDiagram& d,
                                          double f_drive, int n_max);

/// Diagram of the 4x4 diabatic Hamiltonian itself (eigenvalues plus
/// well weights from the eigenvector composition). Used to validate the
/// extraction round trip against a known model.
LevelDiagram synthesize_diagram(const FourLevelModel& m, double bias_min,
                                double bias_max, int n_bias);

}  // namespace squidsim
