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

// Closed-form Landau-Zener tools and the classical rate-equation
// reduction of the driven four-level system. The rate solver is the
// sweep engine's cheap per-cell backend and doubles as a cross-check
// oracle for the full density-matrix dynamics.

#include <Eigen/Dense>
#include <vector>

#include "squidsim/dynamics.hpp"
#include "squidsim/spectrum.hpp"

namespace squidsim {

/// A single linear sweep through an avoided crossing.
struct CrossingSpec {
  double delta;       ///< half-gap [GHz, linear frequency]
  double sweep_rate;  ///< detuning velocity [angular GHz / ns], nonzero
};

/// Diabatic survival probability exp(-2 pi (2 pi delta)^2 / |sweep_rate|).
double lz_probability(const CrossingSpec& c);

namespace detail {

/// Strong-driving n-photon transition rate between one coupled pair:
///   (2 pi delta)^2 J_n(k_rel phi_rf / f)^2 / 2
///     * (gamma2/2) / ((gamma2/2)^2 + detuning^2)
/// with detuning = 2 pi (spacing - n f). Units: 1/ns.
double pair_rate(double delta, double k_rel, double spacing, int n, double f,
                 double phi_rf, double gamma2);

}  // namespace detail

/// n-photon pump rate of the dominant Delta01 transition out of the
/// static ground state (|0L> <-> |1R> when the left well is lower,
/// mirrored otherwise). Throws InvalidOrder for n < 1.
double bessel_rate(int n, const FourLevelModel& m, const DriveParams& d,
                   double gamma2);

/// Classical rate network over the four diabatic occupations.
struct RateModel {
  struct Pump {
    int a, b;     ///< diabatic indices, pumped both ways
    double rate;  ///< [1/ns]
  };
  std::vector<Pump> pumps;
  DecoherenceRates rates;
  InterwellChannel channel = InterwellChannel::Split;
  Eigen::Vector4d occupations = Eigen::Vector4d::Zero();
};

/// Assembles pump terms (orders 1..n_max on the Delta01 pairs and the
/// Delta00 pair) plus the gamma1 / gamma_inter decay channels.
RateModel build_rate_model(const FourLevelModel& m, const DriveParams& d,
                           const DecoherenceRates& r, int n_max);

/// Stationary occupations of the rate network via linear solve. A
/// disconnected network (no unique stationary state) falls back to the
/// decay-only solution: everything in the lower |0> state, split evenly
/// at degeneracy.
Eigen::Vector4d solve_steady_state(RateModel& model);

/// build_rate_model + solve_steady_state.
Eigen::Vector4d rate_steady_state(const FourLevelModel& m,
                                  const DriveParams& d,
                                  const DecoherenceRates& r, int n_max = 3);

}  // namespace squidsim
