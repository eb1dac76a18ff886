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

#include <numbers>

// Unit conventions used throughout the library:
//   flux      in units of the flux quantum Phi0
//   energy    as E/h in GHz (linear frequency)
//   time      in ns  (so 1 GHz * 1 ns = 1)
//   rates     in 1/ns
// Angular frequencies (rad/ns) appear only inside the Hamiltonian
// construction and the Landau-Zener exponent.

namespace squidsim::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Flux quantum Phi0 = h / 2e [Wb] (exact in the 2019 SI).
inline constexpr double phi0 = 2.067833848e-15;

/// Planck constant [J s] (exact).
inline constexpr double planck = 6.62607015e-34;

/// Reduced Planck constant [J s].
inline constexpr double hbar = planck / two_pi;

}  // namespace squidsim::constants
