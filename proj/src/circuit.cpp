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

#include "squidsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "squidsim/constants.hpp"
#include "squidsim/errors.hpp"

namespace squidsim {

namespace {

constexpr double kScanStep = 1e-3;    // coarse sign-change scan [Phi0]
constexpr double kRefineTol = 1e-9;   // bisection tolerance [Phi0]

double bisect_stationary(const CircuitParams& p, double lo, double hi) {
  double flo = potential_derivative(p, lo);
  while (hi - lo > kRefineTol) {
    double mid = 0.5 * (lo + hi);
    double fmid = potential_derivative(p, mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void validate(const CircuitParams& p) {
  if (!(p.inductance > 0.0))
    throw ValidationError("circuit: inductance must be > 0");
  if (!(p.capacitance > 0.0))
    throw ValidationError("circuit: capacitance must be > 0");
  if (!(p.critical_current >= 0.0))
    throw ValidationError("circuit: critical current must be >= 0");
}

double effective_critical_current(const CircuitParams& p) {
  return p.critical_current * std::fabs(std::cos(constants::pi * p.phi_cjj));
}

double beta_l(const CircuitParams& p) {
  return constants::two_pi * p.inductance * effective_critical_current(p) /
         constants::phi0;
}

bool double_well_regime(const CircuitParams& p) {
  double b = beta_l(p);
  return b > 1.0 && b < 4.6;
}

double potential_scale(const CircuitParams& p) {
  using namespace constants;
  return phi0 * phi0 / (4.0 * pi * pi * p.inductance) / planck / 1e9;
}

double lc_frequency(const CircuitParams& p) {
  return 1.0 / (constants::two_pi * std::sqrt(p.inductance * p.capacitance)) /
         1e9;
}

double potential(const CircuitParams& p, double phi) {
  using namespace constants;
  double a = two_pi * (phi - p.phi_q);
  return potential_scale(p) *
         (0.5 * a * a - beta_l(p) * std::cos(two_pi * phi));
}

double potential_derivative(const CircuitParams& p, double phi) {
  using namespace constants;
  return potential_scale(p) * two_pi *
         (two_pi * (phi - p.phi_q) + beta_l(p) * std::sin(two_pi * phi));
}

double potential_curvature(const CircuitParams& p, double phi) {
  using namespace constants;
  return potential_scale(p) * two_pi * two_pi *
         (1.0 + beta_l(p) * std::cos(two_pi * phi));
}

WellGeometry find_wells(const CircuitParams& p) {
  validate(p);

  // Sign-change scan of dU/dphi over the bias-centered window.
  std::vector<double> minima, maxima;
  double lo = p.phi_q - 0.5;
  double hi = p.phi_q + 0.5;
  double prev_phi = lo;
  double prev_d = potential_derivative(p, prev_phi);
  for (double phi = lo + kScanStep; phi <= hi + 0.5 * kScanStep;
       phi += kScanStep) {
    double d = potential_derivative(p, phi);
    if ((prev_d <= 0.0) != (d <= 0.0)) {
      double root = bisect_stationary(p, prev_phi, phi);
      if (potential_curvature(p, root) > 0.0)
        minima.push_back(root);
      else
        maxima.push_back(root);
    }
    prev_phi = phi;
    prev_d = d;
  }

  if (minima.size() < 2)
    throw NoDoubleWell("find_wells: no double well at phi_q = " +
                       std::to_string(p.phi_q) +
                       " (beta_L = " + std::to_string(beta_l(p)) + ")");

  std::sort(minima.begin(), minima.end());
  // Pick the adjacent pair of minima with the lowest energies; for
  // beta_L < 4.6 there are exactly two and this is the identity choice.
  size_t best = 0;
  double best_score = 1e300;
  for (size_t i = 0; i + 1 < minima.size(); ++i) {
    double score =
        std::max(potential(p, minima[i]), potential(p, minima[i + 1]));
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  double left = minima[best];
  double right = minima[best + 1];

  double barrier = 0.0;
  bool found = false;
  for (double m : maxima) {
    if (m > left && m < right &&
        (!found || potential(p, m) > potential(p, barrier))) {
      barrier = m;
      found = true;
    }
  }
  if (!found)
    throw NoDoubleWell("find_wells: no barrier between wells at phi_q = " +
                       std::to_string(p.phi_q));

  return WellGeometry{left,
                      right,
                      barrier,
                      potential(p, left),
                      potential(p, right),
                      potential(p, barrier)};
}

}  // namespace squidsim
