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

// Driven four-level Hamiltonian and the dissipative master equation
//   drho/dt = -i [H, rho] + Gamma[rho]
// integrated in the lab frame (no rotating-wave approximation) with a
// fixed-step classical RK4 scheme. Stored energies and rates are linear
// frequencies (GHz, 1/ns); the 2 pi conversion happens once, inside the
// Hamiltonian construction.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "squidsim/spectrum.hpp"

namespace squidsim {

/// Sinusoidal microwave drive.
struct DriveParams {
  double frequency;          ///< f [GHz]
  double phi_rf;             ///< flux amplitude [Phi0]
  double duration = 1000.0;  ///< [ns]
};

void validate(const DriveParams& d);

/// Environment coupling rates, all in 1/ns.
struct DecoherenceRates {
  double gamma1 = 1.0;        ///< intrawell relaxation |1X> -> |0X>
  double gamma_inter = 1e-3;  ///< interwell relaxation |0_up> -> |0_low>
  double gamma2 = 2.0;        ///< pure dephasing
};

void validate(const DecoherenceRates& r);

/// 4x4 density operator in the diabatic basis {|1R>, |1L>, |0R>, |0L>}.
using DensityMatrix = Eigen::Matrix4cd;

/// Throws InvalidInitialState unless rho is Hermitian within 1e-10,
/// has unit trace within 1e-9, and diagonal entries in [-1e-8, 1+1e-8].
void require_valid_state(const DensityMatrix& rho);

/// |x><x| for a diabatic basis index.
DensityMatrix pure_state(DiabaticIndex x);

/// Driven four-level Hamiltonian at time t [ns], in angular GHz:
/// diagonal 2 pi (E_x0 + k_x phi_rf sin(2 pi f t)), off-diagonal
/// couplings 2 pi Delta_ij with the sparsity of the diabatic model
/// (Delta11: 1R-1L, Delta00: 0R-0L, Delta01: 1R-0L and 1L-0R).
Eigen::Matrix4d hamiltonian_at(const FourLevelModel& m, const DriveParams& d,
                               double t);

/// Interwell relaxation direction chosen by the static |0> energies.
enum class InterwellChannel { TowardRight, TowardLeft, Split };

InterwellChannel interwell_direction(const FourLevelModel& m);

/// Lindblad dissipator Gamma[rho] [1/ns]: jump operators |0X><1X| at
/// gamma1, |0_low><0_up| at gamma_inter (split at degeneracy), and the
/// four diagonal projectors at gamma2 (pure dephasing).
DensityMatrix dissipator(const DecoherenceRates& r, const FourLevelModel& m,
                         const DensityMatrix& rho);

DensityMatrix apply_dissipator(const DecoherenceRates& r,
                               InterwellChannel channel,
                               const DensityMatrix& rho);

/// Sampled time evolution. Populations are the four diagonal entries in
/// diabatic order; p_right = rho_1R1R + rho_0R0R clamped to [0, 1].
struct Trajectory {
  std::vector<double> times;                 ///< [ns]
  std::vector<double> p_right;
  std::vector<Eigen::Vector4d> populations;
  std::vector<double> purity;                ///< tr(rho^2)
  DensityMatrix final_state;
};

/// Fixed-step RK4 integration of the master equation over an arbitrary
/// Hamiltonian callback (angular GHz, i.e. rad/ns). The step never
/// exceeds max_step; rho is re-Hermitized every step and StepUnstable is
/// thrown if the trace drifts from 1 by more than 1e-6. The observer,
/// when set, sees the state after every accepted step.
void integrate_master(
    const std::function<Eigen::Matrix4d(double)>& hamiltonian_rad,
    const DecoherenceRates& rates, InterwellChannel channel,
    DensityMatrix& rho, double t_begin, double t_end, double max_step,
    const std::function<void(double, const DensityMatrix&)>& observer = {});

/// Integration step bound for a model/drive pair: at most 1/64 of the
/// drive period (or of the fastest diagonal swing when that is higher)
/// and at most 1/(32 max rate).
double evolve_max_step(const FourLevelModel& m, const DriveParams& d,
                       const DecoherenceRates& r);

/// Integrates the driven dissipative model from rho0 over d.duration,
/// sampling every sample_every ns (the initial state is sample 0).
Trajectory evolve(const FourLevelModel& m, const DriveParams& d,
                  const DecoherenceRates& r, const DensityMatrix& rho0,
                  double sample_every);

/// rho_0R0R + rho_1R1R clamped to [0, 1].
double right_well_population(const DensityMatrix& rho);

/// Experimental protocol: relax to the lower static |0> state (an even
/// mixture at degeneracy), drive for d.duration, report the right-well
/// population averaged over the last 5 drive periods.
double simulate_protocol(const FourLevelModel& m, const DriveParams& d,
                         const DecoherenceRates& r);

}  // namespace squidsim
