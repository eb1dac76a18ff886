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

#include "squidsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include <Eigen/Dense>

#include "squidsim/circuit.hpp"
#include "squidsim/constants.hpp"
#include "squidsim/dynamics.hpp"
#include "squidsim/lz.hpp"
#include "squidsim/spectrum.hpp"

namespace squidsim {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

/// Representative diabatic model of the reference device (fF-scale
/// capacitance regime); used where the check targets the integrator
/// rather than the eigensolver.
FourLevelModel representative_model() {
  FourLevelModel m;
  m.energy0 = {203.5, 203.5, 190.9, 190.9};
  m.slope = {-1230.0, 1230.0, -1230.0, 1230.0};
  m.delta00 = 0.0043;
  m.delta01 = 0.036;
  m.delta11 = 0.245;
  m.reference_bias = 0.5;
  return m;
}

}  // namespace

namespace {

/// Adiabatic eigenvector of [[-eps, delta], [delta, eps]] with dominant
/// weight on the first diabatic component.
Eigen::Vector2cd adiabatic_state(double eps, double delta) {
  Eigen::Matrix2d h;
  h << -eps, delta, delta, eps;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  Eigen::Vector2d v = std::fabs(es.eigenvectors()(0, 0)) >=
                              std::fabs(es.eigenvectors()(0, 1))
                          ? es.eigenvectors().col(0)
                          : es.eigenvectors().col(1);
  return v.cast<std::complex<double>>();
}

}  // namespace

double lz_survival_numeric(double delta_angular, double rate_angular) {
  double v = std::fabs(rate_angular);
  double delta = std::fabs(delta_angular);

  // window: residual diabatic admixture delta / (v T) enters the result
  // only at second order when the endpoints are projected adiabatically
  double t_end = std::max(delta / (0.005 * v), 20.0 / std::sqrt(v));
  double omega_max = v * t_end + 2.0 * delta;
  double h = 0.02 / omega_max;

  Eigen::Vector2cd psi = adiabatic_state(-0.5 * v * t_end, delta);
  const std::complex<double> mi(0.0, -1.0);
  auto rhs = [&](double t, const Eigen::Vector2cd& s) -> Eigen::Vector2cd {
    double eps = 0.5 * v * t;
    Eigen::Vector2cd out;
    out[0] = mi * (-eps * s[0] + delta * s[1]);
    out[1] = mi * (delta * s[0] + eps * s[1]);
    return out;
  };
  long n = std::max(1L, static_cast<long>(std::ceil(2.0 * t_end / h)));
  double step = 2.0 * t_end / static_cast<double>(n);
  double t = -t_end;
  for (long i = 0; i < n; ++i) {
    Eigen::Vector2cd k1 = rhs(t, psi);
    Eigen::Vector2cd k2 = rhs(t + 0.5 * step, psi + 0.5 * step * k1);
    Eigen::Vector2cd k3 = rhs(t + 0.5 * step, psi + 0.5 * step * k2);
    Eigen::Vector2cd k4 = rhs(t + step, psi + step * k3);
    psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += step;
  }
  psi.normalize();

  Eigen::Vector2cd target = adiabatic_state(0.5 * v * t_end, delta);
  return std::norm(target.dot(psi));
}

CheckResult check_harmonic_limit() {
  CircuitParams p{1.08e-9, 80e-12, 0.0, 0.5, 0.0};
  EigenGridSpec g{0.15, 0.85, 2800, 6};
  EnergySpectrum s = solve_eigen(p, g);
  double f_lc = lc_frequency(p);
  double worst = 0.0;
  for (int i = 0; i + 1 < 6; ++i) {
    double spacing = s.energies[i + 1] - s.energies[i];
    worst = std::max(worst, std::fabs(spacing - f_lc) / f_lc);
  }
  CheckResult r{"harmonic-limit spacing vs 1/(2 pi sqrt(LC))", worst < 0.01,
                fmt("max spacing deviation %.3g%% of %.6g GHz", worst * 100.0,
                    f_lc)};
  return r;
}

CheckResult check_lz_oracle(bool full_grid) {
  const std::vector<double> deltas =
      full_grid ? std::vector<double>{0.01, 0.05, 0.1, 0.3}
                : std::vector<double>{0.01, 0.3};
  const std::vector<double> rates =
      full_grid ? std::vector<double>{0.5, 1.0, 2.0, 5.0}
                : std::vector<double>{0.5, 5.0};
  double worst = 0.0;
  for (double delta_ang : deltas) {
    for (double rate : rates) {
      double numeric = lz_survival_numeric(delta_ang, rate);
      double closed =
          lz_probability({delta_ang / constants::two_pi, rate});
      worst = std::max(worst, std::fabs(numeric - closed));
    }
  }
  return {"Landau-Zener formula vs two-level sweep integration",
          worst < 1e-3, fmt("max |closed-form - numeric| = %.3g", worst)};
}

CheckResult check_trace_preservation() {
  FourLevelModel m = model_at_bias(representative_model(), 0.4987);
  DriveParams d{15.9, 0.012, 50.0};
  DecoherenceRates rates{};
  DensityMatrix rho = pure_state(kState0L);

  double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
  auto ham = [&](double t) { return hamiltonian_at(m, d, t); };
  long samples = 0;
  auto observer = [&](double, const DensityMatrix& state) {
    ++samples;
    if (samples % 100 != 0) return;
    worst_trace = std::max(worst_trace, std::fabs(state.trace().real() - 1.0));
    worst_herm = std::max(
        worst_herm, (state - state.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(state);
    worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
  };
  integrate_master(ham, rates, interwell_direction(m), rho, 0.0, d.duration,
                   evolve_max_step(m, d, rates), observer);
  bool ok = worst_trace < 1e-9 && worst_herm < 1e-10 && worst_eig > -1e-7;
  return {"master-equation trace/Hermiticity/positivity", ok,
          fmt("|tr-1| <= %.2g, min eig >= %.2g", worst_trace, worst_eig)};
}

CheckResult check_round_trip_extraction() {
  FourLevelModel truth = representative_model();
  LevelDiagram d = synthesize_diagram(truth, 0.485, 0.515, 121);
  FourLevelModel fit = extract_four_level_model(d, 0.5);

  double worst = 0.0;
  for (int x = 0; x < 4; ++x)
    worst = std::max(worst,
                     std::fabs(fit.slope[x] - truth.slope[x]) /
                         std::fabs(truth.slope[x]));
  worst = std::max(worst, std::fabs(fit.delta00 - truth.delta00) / truth.delta00);
  worst = std::max(worst, std::fabs(fit.delta01 - truth.delta01) / truth.delta01);
  worst = std::max(worst, std::fabs(fit.delta11 - truth.delta11) / truth.delta11);
  return {"four-level model round trip (synthetic diagram)", worst < 0.02,
          fmt("max parameter error %.3g%%", worst * 100.0)};
}

std::vector<CheckResult> run_all_checks() {
  return {check_harmonic_limit(), check_lz_oracle(false),
          check_trace_preservation(), check_round_trip_extraction()};
}

}  // namespace squidsim
