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
#include "squidsim/spectrum.hpp"

using namespace squidsim;

namespace {

FourLevelModel known_model() {
  FourLevelModel m;
  m.energy0 = {203.5, 203.5, 190.8, 190.8};
  m.slope = {-1065.0, 1065.0, -1215.0, 1215.0};
  m.delta00 = 0.0042;
  m.delta01 = 0.035;
  m.delta11 = 0.24;
  m.reference_bias = 0.5;
  return m;
}

CircuitParams paper_device(double phi_q = 0.5) {
  double ic = 1.39 * constants::phi0 / (constants::two_pi * 1.08e-9);
  return CircuitParams{1.08e-9, 80e-15, ic, phi_q, 0.0};
}

}  // namespace

TEST_SUITE_BEGIN("extraction");

TEST_CASE("round trip: a known model is recovered from its own diagram") {
  FourLevelModel truth = known_model();
  LevelDiagram d = synthesize_diagram(truth, 0.485, 0.515, 121);
  FourLevelModel fit = extract_four_level_model(d, 0.5);

  CHECK(fit.delta00 == doctest::Approx(truth.delta00).epsilon(0.01));
  CHECK(fit.delta01 == doctest::Approx(truth.delta01).epsilon(0.01));
  CHECK(fit.delta11 == doctest::Approx(truth.delta11).epsilon(0.01));
  for (int x = 0; x < 4; ++x) {
    CHECK(fit.slope[x] == doctest::Approx(truth.slope[x]).epsilon(0.02));
    CHECK(fit.energy0[x] == doctest::Approx(truth.energy0[x]).epsilon(1e-4));
  }
}

TEST_CASE("round trip holds for an asymmetric device") {
  FourLevelModel truth;
  truth.energy0 = {151.0, 149.5, 140.2, 139.6};
  truth.slope = {-980.0, 1030.0, -1120.0, 1100.0};
  truth.delta00 = 0.008;
  truth.delta01 = 0.06;
  truth.delta11 = 0.31;
  truth.reference_bias = 0.5;
  LevelDiagram d = synthesize_diagram(truth, 0.48, 0.52, 161);
  FourLevelModel fit = extract_four_level_model(d, 0.5);
  CHECK(fit.delta00 == doctest::Approx(truth.delta00).epsilon(0.02));
  CHECK(fit.delta01 == doctest::Approx(truth.delta01).epsilon(0.02));
  CHECK(fit.delta11 == doctest::Approx(truth.delta11).epsilon(0.02));
  for (int x = 0; x < 4; ++x)
    CHECK(fit.slope[x] == doctest::Approx(truth.slope[x]).epsilon(0.02));
}

TEST_CASE("splittings below the diagram resolution are still resolved") {
  // gap minimum much finer than the bias step: the quadratic fit on the
  // squared gap is exact for an isolated two-level crossing
  FourLevelModel truth = known_model();
  truth.delta00 = 2e-4;
  LevelDiagram d = synthesize_diagram(truth, 0.485, 0.515, 61);
  FourLevelModel fit = extract_four_level_model(d, 0.5);
  CHECK(fit.delta00 == doctest::Approx(truth.delta00).epsilon(0.02));
}

TEST_CASE("missing crossing in range throws NoCrossingFound") {
  // window too narrow to contain the 0-1 interwell crossings
  LevelDiagram d = synthesize_diagram(known_model(), 0.4985, 0.5015, 41);
  CHECK_THROWS_AS(extract_four_level_model(d), NoCrossingFound);
}

TEST_CASE("gap minimum on the diagram edge throws NoCrossingFound") {
  // the 0R-0L crossing sits exactly on the first bias sample
  LevelDiagram d = synthesize_diagram(known_model(), 0.5, 0.515, 41);
  CHECK_THROWS_AS(extract_four_level_model(d), NoCrossingFound);
}

TEST_CASE("degenerate diagrams are rejected") {
  LevelDiagram d = synthesize_diagram(known_model(), 0.485, 0.515, 3);
  CHECK_THROWS_AS(extract_four_level_model(d), ValidationError);
}

TEST_CASE("model_at_bias shifts energies along the diabatic lines") {
  FourLevelModel m = known_model();
  FourLevelModel shifted = model_at_bias(m, 0.503);
  CHECK(shifted.reference_bias == 0.503);
  for (int x = 0; x < 4; ++x)
    CHECK(shifted.energy0[x] ==
          doctest::Approx(m.energy0[x] + m.slope[x] * 0.003).epsilon(1e-12));
}

TEST_CASE("paper device: extracted model matches the tunneling hierarchy") {
  LevelDiagram d = level_diagram(paper_device(), 0.485, 0.515, 61,
                                 default_grid(0.485, 0.515), false);
  FourLevelModel m = extract_four_level_model(d);

  CHECK(m.delta00 > 0.0);
  CHECK(m.delta00 < m.delta01);  // the regime driving the inversion physics
  CHECK(m.delta01 < m.delta11);
  // left/right branches tilt with opposite slopes of equal size
  CHECK(m.slope[kState0R] == doctest::Approx(-m.slope[kState0L]).epsilon(1e-3));
  CHECK(m.slope[kState1R] == doctest::Approx(-m.slope[kState1L]).epsilon(1e-3));
  CHECK(m.slope[kState0R] < -1000.0);
  // intrawell spacing near the drive scale
  double intrawell = m.energy0[kState1R] - m.energy0[kState0R];
  CHECK(intrawell == doctest::Approx(12.7).epsilon(0.05));
}

TEST_SUITE_END();
