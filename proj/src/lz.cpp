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

#include "squidsim/lz.hpp"

#include <cmath>

#include "squidsim/constants.hpp"
#include "squidsim/errors.hpp"

namespace squidsim {

double lz_probability(const CrossingSpec& c) {
  using constants::two_pi;
  if (!(c.delta >= 0.0))
    throw ValidationError("lz: delta must be >= 0");
  if (c.sweep_rate == 0.0)
    throw ValidationError("lz: sweep_rate must be nonzero");
  double delta_ang = two_pi * c.delta;
  return std::exp(-two_pi * delta_ang * delta_ang / std::fabs(c.sweep_rate));
}

namespace detail {

double pair_rate(double delta, double k_rel, double spacing, int n, double f,
                 double phi_rf, double gamma2) {
  using constants::two_pi;
  double x = k_rel * phi_rf / f;
  double jn = std::cyl_bessel_j(n, std::fabs(x));
  double delta_ang = two_pi * delta;
  double detuning = two_pi * (spacing - n * f);
  double half_width = 0.5 * gamma2;
  double lorentz = half_width / (half_width * half_width + detuning * detuning);
  return 0.5 * delta_ang * delta_ang * jn * jn * lorentz;
}

}  // namespace detail

double bessel_rate(int n, const FourLevelModel& m, const DriveParams& d,
                   double gamma2) {
  if (n < 1) throw InvalidOrder("bessel_rate: photon number must be >= 1");
  if (!(gamma2 > 0.0))
    throw ValidationError("bessel_rate: gamma2 must be > 0");

  // Dominant transition out of the static ground state: |0L> <-> |1R>
  // when the left well is lower, |0R> <-> |1L> otherwise.
  int ground = m.energy0[kState0L] <= m.energy0[kState0R] ? kState0L : kState0R;
  int excited = ground == kState0L ? kState1R : kState1L;
  double spacing = std::fabs(m.energy0[excited] - m.energy0[ground]);
  double k_rel = m.slope[excited] - m.slope[ground];
  return detail::pair_rate(m.delta01, k_rel, spacing, n, d.frequency, d.phi_rf,
                           gamma2);
}

RateModel build_rate_model(const FourLevelModel& m, const DriveParams& d,
                           const DecoherenceRates& r, int n_max) {
  if (n_max < 1) throw InvalidOrder("rate model: n_max must be >= 1");
  validate(d);
  validate(r);

  RateModel model;
  model.rates = r;
  model.channel = interwell_direction(m);

  const struct {
    int a, b;
    double delta;
  } coupled[] = {
      {kState1R, kState0L, m.delta01},
      {kState1L, kState0R, m.delta01},
      {kState0R, kState0L, m.delta00},
  };
  for (const auto& pair : coupled) {
    if (pair.delta == 0.0) continue;
    double spacing = std::fabs(m.energy0[pair.a] - m.energy0[pair.b]);
    double k_rel = m.slope[pair.a] - m.slope[pair.b];
    double total = 0.0;
    for (int n = 1; n <= n_max; ++n)
      total += detail::pair_rate(pair.delta, k_rel, spacing, n, d.frequency,
                                 d.phi_rf, r.gamma2);
    if (total > 0.0) model.pumps.push_back({pair.a, pair.b, total});
  }
  return model;
}

Eigen::Vector4d solve_steady_state(RateModel& model) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  auto add_flow = [&m](int from, int to, double rate) {
    if (rate == 0.0) return;
    m(to, from) += rate;
    m(from, from) -= rate;
  };
  for (const auto& p : model.pumps) {
    add_flow(p.a, p.b, p.rate);
    add_flow(p.b, p.a, p.rate);
  }
  add_flow(kState1R, kState0R, model.rates.gamma1);
  add_flow(kState1L, kState0L, model.rates.gamma1);
  switch (model.channel) {
    case InterwellChannel::TowardRight:
      add_flow(kState0L, kState0R, model.rates.gamma_inter);
      break;
    case InterwellChannel::TowardLeft:
      add_flow(kState0R, kState0L, model.rates.gamma_inter);
      break;
    case InterwellChannel::Split:
      add_flow(kState0L, kState0R, 0.5 * model.rates.gamma_inter);
      add_flow(kState0R, kState0L, 0.5 * model.rates.gamma_inter);
      break;
  }

  Eigen::FullPivLU<Eigen::Matrix4d> lu(m);
  lu.setThreshold(1e-12);
  if (lu.rank() < 3) {
    // SingularRateMatrix case: the network is disconnected, fall back to
    // the decay-only stationary state.
    Eigen::Vector4d p = Eigen::Vector4d::Zero();
    switch (model.channel) {
      case InterwellChannel::TowardRight: p[kState0R] = 1.0; break;
      case InterwellChannel::TowardLeft: p[kState0L] = 1.0; break;
      case InterwellChannel::Split:
        p[kState0R] = p[kState0L] = 0.5;
        break;
    }
    model.occupations = p;
    return p;
  }

  // Replace one balance row with the normalization constraint.
  Eigen::Matrix4d a = m;
  a.row(3) = Eigen::RowVector4d::Ones();
  Eigen::Vector4d b(0.0, 0.0, 0.0, 1.0);
  Eigen::Vector4d p = a.fullPivLu().solve(b);
  for (int i = 0; i < 4; ++i) p[i] = std::max(p[i], 0.0);
  p /= p.sum();
  model.occupations = p;
  return p;
}

Eigen::Vector4d rate_steady_state(const FourLevelModel& m,
                                  const DriveParams& d,
                                  const DecoherenceRates& r, int n_max) {
  RateModel model = build_rate_model(m, d, r, n_max);
  return solve_steady_state(model);
}

}  // namespace squidsim
