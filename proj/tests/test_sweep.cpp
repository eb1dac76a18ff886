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
#include "squidsim/sweep.hpp"

using namespace squidsim;

namespace {

CircuitParams paper_device() {
  double ic = 1.39 * constants::phi0 / (constants::two_pi * 1.08e-9);
  return CircuitParams{1.08e-9, 80e-15, ic, 0.5, 0.0};
}

SweepSpec small_spec() {
  SweepSpec s;
  s.bias_min = 0.494;
  s.bias_max = 0.506;
  s.n_bias = 25;
  s.p_min = -12.0;
  s.p_max = 4.0;
  s.n_power = 5;
  s.f = 15.9;
  s.solver = SweepSolver::RateEquation;
  s.duration = 200.0;
  return s;
}

const LevelDiagram& small_diagram() {
  static LevelDiagram d = level_diagram(
      paper_device(), 0.494, 0.506, 25, default_grid(0.494, 0.506), false);
  return d;
}

SweepGrid flat_grid(int n_bias, int n_power, double value) {
  SweepGrid g;
  g.solver_name = "rate";
  g.bias.resize(n_bias);
  g.power.resize(n_power);
  for (int i = 0; i < n_bias; ++i) g.bias[i] = 0.49 + 0.001 * i;
  for (int j = 0; j < n_power; ++j) g.power[j] = -20.0 + j;
  g.values = Eigen::MatrixXd::Constant(n_bias, n_power, value);
  g.provenance.assign(static_cast<size_t>(n_bias) * n_power, "rate");
  return g;
}

}  // namespace

TEST_SUITE_BEGIN("sweep");

TEST_CASE("power_to_amplitude: dB arithmetic") {
  PowerCalibration cal{-20.0, 1e-3};
  CHECK(power_to_amplitude(-20.0, cal) == 1e-3);
  CHECK(power_to_amplitude(-20.0 + 6.0206, cal) ==
        doctest::Approx(2e-3).epsilon(1e-5));
  CHECK(power_to_amplitude(-40.0, cal) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK_THROWS_AS(power_to_amplitude(0.0, {0.0, 0.0}), ValidationError);
}

TEST_CASE("bias step curve: polarized wells with 0.5 at the degeneracy") {
  SweepSpec s = small_spec();
  BiasScan scan = bias_scan_no_mw(paper_device(), s, &small_diagram());
  REQUIRE(scan.bias.size() == 25);
  for (size_t i = 0; i < scan.bias.size(); ++i) {
    if (scan.bias[i] < 0.4999)
      CHECK(scan.p_right[i] == 0.0);
    else if (scan.bias[i] > 0.5001)
      CHECK(scan.p_right[i] == 1.0);
    else
      CHECK(scan.p_right[i] == 0.5);
  }
  // monotone nondecreasing step
  for (size_t i = 1; i < scan.bias.size(); ++i)
    CHECK(scan.p_right[i] >= scan.p_right[i - 1]);
}

TEST_CASE("run_sweep: rate solver populates every cell deterministically") {
  SweepSpec s = small_spec();
  SweepGrid g = run_sweep(paper_device(), s, {}, {}, &small_diagram());
  CHECK(g.failures.empty());
  CHECK(g.solver_name == "rate");
  for (int i = 0; i < s.n_bias; ++i) {
    for (int j = 0; j < s.n_power; ++j) {
      CHECK(g.values(i, j) >= 0.0);
      CHECK(g.values(i, j) <= 1.0);
      CHECK(g.cell_provenance(i, j) == "rate");
    }
  }
  // symmetric column reports the symmetric value
  int mid = s.n_bias / 2;
  CHECK(g.bias[mid] == doctest::Approx(0.5));
  for (int j = 0; j < s.n_power; ++j)
    CHECK(g.values(mid, j) == doctest::Approx(0.5).epsilon(1e-6));

  SweepGrid g2 = run_sweep(paper_device(), s, {}, {}, &small_diagram());
  CHECK((g.values - g2.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("run_sweep: vanishing drive reduces to the static step curve") {
  SweepSpec s = small_spec();
  s.n_power = 1;
  s.p_min = s.p_max = -400.0;  // amplitude below any transition scale
  BiasScan scan = bias_scan_no_mw(paper_device(), s, &small_diagram());

  SUBCASE("rate solver") {
    SweepGrid g = run_sweep(paper_device(), s, {}, {}, &small_diagram());
    for (int i = 0; i < s.n_bias; ++i)
      CHECK(g.values(i, 0) == doctest::Approx(scan.p_right[i]).epsilon(1e-12));
  }
  SUBCASE("full dynamics solver") {
    s.solver = SweepSolver::FullDynamics;
    s.duration = 20.0;
    SweepGrid g = run_sweep(paper_device(), s, {}, {}, &small_diagram());
    // the static Delta01 coupling admixes ~(Delta/spacing)^2 of the
    // opposite well even at zero drive; agreement is exact only up to
    // that leakage
    for (int i = 0; i < s.n_bias; ++i)
      CHECK(std::fabs(g.values(i, 0) - scan.p_right[i]) < 2e-3);
  }
}

TEST_CASE("run_sweep: inversion features appear near the n=1 resonance") {
  SweepSpec s = small_spec();
  SweepGrid g = run_sweep(paper_device(), s, {}, {}, &small_diagram());
  BiasScan scan = bias_scan_no_mw(paper_device(), s, &small_diagram());
  FeatureReport report = detect_features(g, scan, small_diagram(), s.f);
  CHECK(!report.inversions.empty());
  for (const auto& inv : report.inversions) {
    CHECK(inv.population > 0.5);
    // the populated side is opposite the static ground side
    int i = static_cast<int>(std::lround((inv.bias - s.bias_min) /
                                         ((s.bias_max - s.bias_min) / 24)));
    if (inv.ground_side == WellSide::Left)
      CHECK(scan.p_right[i] == 0.0);
    else
      CHECK(scan.p_right[i] == 1.0);
  }
}

TEST_CASE("run_sweep: extraction failure marks cells instead of aborting") {
  // a window so far off the degeneracy that neither the sweep diagram
  // nor the wider fallback window contains the interwell crossings
  CircuitParams p = paper_device();
  SweepSpec s = small_spec();
  s.bias_min = 0.521;
  s.bias_max = 0.523;
  s.n_bias = 5;
  s.n_power = 2;
  LevelDiagram d = level_diagram(p, s.bias_min, s.bias_max, 5,
                                 default_grid(s.bias_min, s.bias_max), false);
  SweepGrid g = run_sweep(p, s, {}, {}, &d);
  CHECK(g.failures.size() == 10);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(std::isnan(g.values(i, j)));
      CHECK(g.cell_provenance(i, j).rfind("failed:", 0) == 0);
    }
}

TEST_CASE("add_shot_noise: degenerate cells and determinism") {
  SweepGrid g = flat_grid(4, 3, 0.0);
  g.values(1, 1) = 1.0;
  g.values(2, 2) = 0.37;
  SweepGrid noisy = add_shot_noise(g, 500, 99);
  CHECK(noisy.values(0, 0) == 0.0);
  CHECK(noisy.values(1, 1) == 1.0);
  CHECK(noisy.values(2, 2) > 0.2);
  CHECK(noisy.values(2, 2) < 0.55);
  CHECK(noisy.shots == 500);
  CHECK(noisy.noisy);

  SweepGrid again = add_shot_noise(g, 500, 99);
  CHECK((noisy.values - again.values).cwiseAbs().maxCoeff() == 0.0);
  SweepGrid other = add_shot_noise(g, 500, 100);
  CHECK((noisy.values - other.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("add_shot_noise: binomial statistics at the experimental count") {
  SweepGrid g = flat_grid(40, 30, 0.5);
  SweepGrid noisy = add_shot_noise(g, 20000, 4242);
  double mean = noisy.values.mean();
  double var = (noisy.values.array() - mean).square().sum() /
               (noisy.values.size() - 1);
  double sd = std::sqrt(var);
  CHECK(mean == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(sd > 0.0030);
  CHECK(sd < 0.0041);
}

TEST_CASE("add_shot_noise: large counts converge to the clean grid") {
  SweepGrid g = flat_grid(5, 4, 0.0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j) g.values(i, j) = (i * 4 + j) / 19.0;
  SweepGrid noisy = add_shot_noise(g, 1000000, 7);
  CHECK((noisy.values - g.values).cwiseAbs().maxCoeff() < 0.005);
}

TEST_CASE("detect_features: quiet grid yields an empty report") {
  SweepGrid g = flat_grid(13, 3, 0.0);
  for (int i = 0; i < 13; ++i)
    for (int j = 0; j < 3; ++j) g.values(i, j) = i < 6 ? 0.0 : (i == 6 ? 0.5 : 1.0);
  BiasScan base;
  base.bias = g.bias;
  base.p_right.assign(13, 0.0);
  for (int i = 0; i < 13; ++i) base.p_right[i] = g.values(i, 0);
  FourLevelModel m;
  m.energy0 = {16.0, 19.0, 3.0, 0.0};
  m.slope = {-1100.0, 1100.0, -1200.0, 1200.0};
  m.delta00 = 0.005;
  m.delta01 = 0.05;
  m.delta11 = 0.2;
  m.reference_bias = 0.496;
  FeatureReport r = detect_features(g, base, synthesize_diagram(m, 0.49, 0.502, 13), 15.9);
  CHECK(r.peaks.empty());
  CHECK(r.dips.empty());
  CHECK(r.inversions.empty());
}

TEST_CASE("detect_features: synthetic bump becomes a labeled peak") {
  SweepGrid g = flat_grid(13, 2, 0.0);
  BiasScan base;
  base.bias = g.bias;
  base.p_right.assign(13, 0.0);

  // bump along bias in column 1, peaking at index 6 (bias 0.496)
  g.values(5, 1) = 0.3;
  g.values(6, 1) = 0.8;
  g.values(7, 1) = 0.3;

  // diagram whose 0R/0L spacing hits 15.9 GHz near bias 0.496
  FourLevelModel m;
  m.energy0 = {40.0, 42.0, 15.9 / 2, -15.9 / 2};
  m.slope = {0.0, 0.0, 0.0, 0.0};
  m.delta00 = 0.01;
  m.delta01 = 0.0;
  m.delta11 = 0.0;
  m.reference_bias = 0.496;
  m.slope = {-10.0, 10.0, -10.0, 10.0};
  LevelDiagram d = synthesize_diagram(m, 0.49, 0.502, 13);

  FeatureReport r = detect_features(g, base, d, 15.9);
  REQUIRE(r.peaks.size() == 1);
  CHECK(r.peaks[0].bias == doctest::Approx(0.496));
  CHECK(r.peaks[0].population == doctest::Approx(0.8));
  REQUIRE(r.peaks[0].photon_n.has_value());
  CHECK(*r.peaks[0].photon_n == 1);
  // the bump crosses 0.5: also an inversion cell
  CHECK(!r.inversions.empty());
  CHECK(r.inversions[0].ground_side == WellSide::Left);
}

TEST_CASE("detect_features: mirrored grid swaps peaks and dips") {
  SweepGrid g = flat_grid(13, 1, 0.0);
  BiasScan base;
  base.bias = g.bias;
  base.p_right.assign(13, 0.0);
  for (int i = 0; i < 13; ++i) {
    base.p_right[i] = i < 6 ? 0.0 : (i == 6 ? 0.5 : 1.0);
    g.values(i, 0) = base.p_right[i];
  }
  g.values(3, 0) = 0.4;   // peak on the left side
  g.values(9, 0) = 0.6;   // dip on the right side

  FourLevelModel m;
  m.energy0 = {16.0, 19.0, 3.0, 0.0};
  m.slope = {-1100.0, 1100.0, -1200.0, 1200.0};
  m.delta00 = 0.005;
  m.delta01 = 0.05;
  m.delta11 = 0.2;
  m.reference_bias = 0.496;
  LevelDiagram d = synthesize_diagram(m, 0.49, 0.502, 13);
  FeatureReport r = detect_features(g, base, d, 15.9);

  // mirror the grid, baseline and diagram about the center bias
  SweepGrid gm = g;
  BiasScan bm = base;
  for (int i = 0; i < 13; ++i) {
    gm.values(i, 0) = 1.0 - g.values(12 - i, 0);
    bm.p_right[i] = 1.0 - base.p_right[12 - i];
  }
  FourLevelModel mm = m;
  std::swap(mm.energy0[kState1R], mm.energy0[kState1L]);
  std::swap(mm.energy0[kState0R], mm.energy0[kState0L]);
  for (int x = 0; x < 4; ++x) mm.slope[x] = -mm.slope[x];
  LevelDiagram dm = synthesize_diagram(mm, 0.49, 0.502, 13);
  FeatureReport rm = detect_features(gm, bm, dm, 15.9);

  REQUIRE(r.peaks.size() == rm.dips.size());
  REQUIRE(r.dips.size() == rm.peaks.size());
  CHECK(r.peaks[0].bias ==
        doctest::Approx(g.bias[0] + g.bias[12] - rm.dips[0].bias));
  CHECK(r.peaks[0].population == doctest::Approx(1.0 - rm.dips[0].population));
}

TEST_CASE("sweep spec validation") {
  SweepSpec s = small_spec();
  s.n_bias = 0;
  CHECK_THROWS_AS(validate(s), ValidationError);
  s = small_spec();
  s.bias_min = s.bias_max + 0.01;
  CHECK_THROWS_AS(validate(s), ValidationError);
  s = small_spec();
  s.shots = -5;
  CHECK_THROWS_AS(validate(s), ValidationError);
  CHECK_THROWS_AS(add_shot_noise(flat_grid(2, 2, 0.5), 0, 1), ValidationError);
}

TEST_SUITE_END();
