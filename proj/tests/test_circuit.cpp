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

#include <doctest.h>

#include <cmath>

#include "squidsim/circuit.hpp"
#include "squidsim/constants.hpp"
#include "squidsim/errors.hpp"

using namespace squidsim;

namespace {

// reference device: L = 1080 pH, beta_L = 1.39 (Ic = 0.4236 uA)
CircuitParams reference(double phi_q = 0.5) {
  double ic = 1.39 * constants::phi0 / (constants::two_pi * 1.08e-9);
  return CircuitParams{1.08e-9, 80e-15, ic, phi_q, 0.0};
}

}  // namespace

TEST_SUITE_BEGIN("circuit");

TEST_CASE("effective critical current follows |cos(pi phi_cjj)|") {
  CircuitParams p = reference();
  CHECK(effective_critical_current(p) == doctest::Approx(0.4236e-6).epsilon(1e-3));

  p.phi_cjj = 0.5;
  CHECK(effective_critical_current(p) < 1e-20);

  p.phi_cjj = 1.0 / 3.0;  // cos(pi/3) = 1/2
  CHECK(effective_critical_current(p) ==
        doctest::Approx(0.2118e-6).epsilon(1e-3));
}

TEST_CASE("potential scale and symmetric-point value") {
  CircuitParams p = reference();
  // U0/h = Phi0^2 / (4 pi^2 L h) for L = 1080 pH
  CHECK(potential_scale(p) == doctest::Approx(151.3533).epsilon(1e-4));
  CHECK(beta_l(p) == doctest::Approx(1.39).epsilon(1e-12));

  // at phi = phi_q = 0.5 the quadratic term vanishes and cos(pi) = -1
  CHECK(potential(p, 0.5) ==
        doctest::Approx(1.39 * potential_scale(p)).epsilon(1e-12));
  CHECK(potential(p, 0.5) == doctest::Approx(210.38).epsilon(1e-3));
}

TEST_CASE("zero beta_L gives a pure parabola with minimum at phi_q") {
  CircuitParams p{1.08e-9, 80e-12, 0.0, 0.3, 0.0};
  double u0 = potential_scale(p);
  for (double phi : {-0.2, 0.0, 0.3, 0.55, 1.0}) {
    double a = constants::two_pi * (phi - 0.3);
    CHECK(potential(p, phi) == doctest::Approx(0.5 * u0 * a * a).epsilon(1e-12));
  }
  CHECK(potential_derivative(p, 0.3) == doctest::Approx(0.0));
}

TEST_CASE("find_wells: symmetric double well at phi_q = 0.5") {
  WellGeometry w = find_wells(reference());
  CHECK(w.left_min < w.barrier_top);
  CHECK(w.barrier_top < w.right_min);
  CHECK(w.barrier_top == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(w.u_left == doctest::Approx(w.u_right).epsilon(1e-9));
  CHECK(w.u_barrier > w.u_left);
  // wells sit near 0.5 +- 0.216 for beta_L = 1.39
  CHECK(w.right_min == doctest::Approx(0.7163).epsilon(1e-3));
}

TEST_CASE("find_wells: monostable potential throws NoDoubleWell") {
  CircuitParams p = reference();
  p.critical_current *= 0.5 / 1.39;  // beta_L = 0.5
  CHECK_THROWS_AS(find_wells(p), NoDoubleWell);
}

TEST_CASE("find_wells: tilt direction") {
  WellGeometry w = find_wells(reference(0.502));
  CHECK(w.u_right < w.u_left);
  WellGeometry w2 = find_wells(reference(0.498));
  CHECK(w2.u_left < w2.u_right);
}

TEST_CASE("validation rejects nonphysical parameters") {
  CircuitParams p = reference();
  p.inductance = 0.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = reference();
  p.critical_current = -1e-6;
  CHECK_THROWS_AS(validate(p), ValidationError);
}

TEST_CASE("property: potential symmetric about the degeneracy point") {
  CircuitParams p = reference(0.5);
  for (int i = 1; i <= 40; ++i) {
    double delta = 0.012 * i;
    CHECK(std::fabs(potential(p, 0.5 + delta) - potential(p, 0.5 - delta)) <
          1e-9);
  }
}

TEST_CASE("property: cosine-argument periodicity") {
  CircuitParams p = reference(0.48);
  CircuitParams shifted = p;
  shifted.phi_q += 1.0;
  for (double phi : {0.1, 0.37, 0.5, 0.62, 0.93}) {
    CHECK(potential(shifted, phi + 1.0) ==
          doctest::Approx(potential(p, phi)).epsilon(1e-12));
  }
}

TEST_CASE("property: beta_L never increases with phi_cjj on [0, 0.5]") {
  CircuitParams p = reference();
  double prev = beta_l(p);
  for (int i = 1; i <= 50; ++i) {
    p.phi_cjj = 0.5 * i / 50.0;
    double b = beta_l(p);
    CHECK(b <= prev + 1e-15);
    prev = b;
  }
}

TEST_CASE("property: returned well geometry always has a positive barrier") {
  for (double bias : {0.485, 0.492, 0.5, 0.508, 0.515}) {
    WellGeometry w = find_wells(reference(bias));
    CHECK(w.u_barrier - std::max(w.u_left, w.u_right) > 0.0);
    CHECK(w.left_min < w.barrier_top);
    CHECK(w.barrier_top < w.right_min);
  }
}

TEST_SUITE_END();
