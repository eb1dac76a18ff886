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

// rf-SQUID circuit parameters and the classical double-well potential
// landscape. All functions here are pure; values are immutable.

namespace squidsim {

/// Physical parameters of the rf-SQUID loop.
struct CircuitParams {
  double inductance;              ///< loop inductance L [H]
  double capacitance;             ///< junction capacitance C [F]
  double critical_current;        ///< junction critical current Ic [A]
  double phi_q = 0.5;             ///< external qubit flux bias [Phi0]
  double phi_cjj = 0.0;           ///< compound-junction flux [Phi0]
};

/// Throws ValidationError unless L > 0, C > 0 and Ic >= 0.
void validate(const CircuitParams& p);

/// Critical current suppressed by the compound-junction flux:
/// Ic * |cos(pi * phi_cjj)|.
double effective_critical_current(const CircuitParams& p);

/// Screening parameter beta_L = 2 pi L Ic_eff / Phi0 (dimensionless).
double beta_l(const CircuitParams& p);

/// True iff beta_L lies in the double-well operating window (1, 4.6).
bool double_well_regime(const CircuitParams& p);

/// Potential prefactor U0 / h = Phi0^2 / (4 pi^2 L h) [GHz].
double potential_scale(const CircuitParams& p);

/// Plasma frequency of the bare LC circuit, 1 / (2 pi sqrt(LC)) [GHz].
double lc_frequency(const CircuitParams& p);

/// Double-well potential U(phi) / h [GHz] at flux phi [Phi0]:
/// U0 * { (1/2) (2 pi (phi - phi_q))^2 - beta_L cos(2 pi phi) }.
double potential(const CircuitParams& p, double phi);

/// dU/dphi [GHz per Phi0].
double potential_derivative(const CircuitParams& p, double phi);

/// d^2U/dphi^2 [GHz per Phi0^2].
double potential_curvature(const CircuitParams& p, double phi);

/// Stationary points of the double well. Flux values in Phi0 units,
/// energies as U/h in GHz. Satisfies left_min < barrier_top < right_min
/// and u_barrier > max(u_left, u_right).
struct WellGeometry {
  double left_min;
  double right_min;
  double barrier_top;
  double u_left;
  double u_right;
  double u_barrier;
};

/// Locates both minima and the intervening maximum by a sign-change scan
/// of dU/dphi on [phi_q - 0.5, phi_q + 0.5] followed by bisection.
/// Throws NoDoubleWell when fewer than two minima exist at this bias.
WellGeometry find_wells(const CircuitParams& p);

}  // namespace squidsim
