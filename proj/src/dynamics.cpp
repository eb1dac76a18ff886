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

#include "squidsim/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "squidsim/constants.hpp"
#include "squidsim/errors.hpp"

namespace squidsim {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-9;
constexpr double kDiagTol = 1e-8;
constexpr double kTraceDriftLimit = 1e-6;

using complexd = std::complex<double>;

/// -i [H, rho] + Gamma[rho] with H in angular GHz.
DensityMatrix master_rhs(const Eigen::Matrix4d& h_ang,
                         const DecoherenceRates& rates,
                         InterwellChannel channel, const DensityMatrix& rho) {
  Eigen::Matrix4cd commutator = h_ang * rho - rho * h_ang;
  return complexd(0.0, -1.0) * commutator +
         apply_dissipator(rates, channel, rho);
}

void add_jump(DensityMatrix& out, const DensityMatrix& rho, double rate,
              int from, int to) {
  if (rate == 0.0) return;
  out(to, to) += rate * rho(from, from);
  for (int k = 0; k < 4; ++k) {
    out(from, k) -= 0.5 * rate * rho(from, k);
    out(k, from) -= 0.5 * rate * rho(k, from);
  }
}

}  // namespace

void validate(const DriveParams& d) {
  if (!(d.frequency > 0.0)) throw ValidationError("drive: frequency must be > 0");
  if (!(d.phi_rf >= 0.0)) throw ValidationError("drive: phi_rf must be >= 0");
  if (!(d.duration > 0.0)) throw ValidationError("drive: duration must be > 0");
}

void validate(const DecoherenceRates& r) {
  if (!(r.gamma1 >= 0.0 && r.gamma_inter >= 0.0 && r.gamma2 >= 0.0))
    throw ValidationError("rates: all decoherence rates must be >= 0");
}

void require_valid_state(const DensityMatrix& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw InvalidInitialState("density matrix is not Hermitian");
  if (std::fabs(rho.trace().real() - 1.0) > kTraceTol ||
      std::fabs(rho.trace().imag()) > kTraceTol)
    throw InvalidInitialState("density matrix trace is not 1");
  for (int i = 0; i < 4; ++i) {
    double p = rho(i, i).real();
    if (p < -kDiagTol || p > 1.0 + kDiagTol)
      throw InvalidInitialState("population out of [0, 1]");
  }
}

DensityMatrix pure_state(DiabaticIndex x) {
  DensityMatrix rho = DensityMatrix::Zero();
  rho(x, x) = 1.0;
  return rho;
}

Eigen::Matrix4d hamiltonian_at(const FourLevelModel& m, const DriveParams& d,
                               double t) {
  using constants::two_pi;
  double s = d.phi_rf * std::sin(two_pi * d.frequency * t);
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  for (int x = 0; x < 4; ++x)
    h(x, x) = two_pi * (m.energy0[x] + m.slope[x] * s);
  h(kState1R, kState1L) = h(kState1L, kState1R) = two_pi * m.delta11;
  h(kState0R, kState0L) = h(kState0L, kState0R) = two_pi * m.delta00;
  h(kState1R, kState0L) = h(kState0L, kState1R) = two_pi * m.delta01;
  h(kState1L, kState0R) = h(kState0R, kState1L) = two_pi * m.delta01;
  return h;
}

InterwellChannel interwell_direction(const FourLevelModel& m) {
  double diff = m.energy0[kState0R] - m.energy0[kState0L];
  if (diff > 0.0) return InterwellChannel::TowardLeft;
  if (diff < 0.0) return InterwellChannel::TowardRight;
  return InterwellChannel::Split;
}

DensityMatrix apply_dissipator(const DecoherenceRates& r,
                               InterwellChannel channel,
                               const DensityMatrix& rho) {
  DensityMatrix out = DensityMatrix::Zero();
  add_jump(out, rho, r.gamma1, kState1R, kState0R);
  add_jump(out, rho, r.gamma1, kState1L, kState0L);
  switch (channel) {
    case InterwellChannel::TowardRight:
      add_jump(out, rho, r.gamma_inter, kState0L, kState0R);
      break;
    case InterwellChannel::TowardLeft:
      add_jump(out, rho, r.gamma_inter, kState0R, kState0L);
      break;
    case InterwellChannel::Split:
      add_jump(out, rho, 0.5 * r.gamma_inter, kState0L, kState0R);
      add_jump(out, rho, 0.5 * r.gamma_inter, kState0R, kState0L);
      break;
  }
  if (r.gamma2 != 0.0) {
    // sum over diagonal projectors: gamma2 (diag(rho) - rho)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) out(i, j) -= r.gamma2 * rho(i, j);
  }
  return out;
}

DensityMatrix dissipator(const DecoherenceRates& r, const FourLevelModel& m,
                         const DensityMatrix& rho) {
  validate(r);
  return apply_dissipator(r, interwell_direction(m), rho);
}

void integrate_master(
    const std::function<Eigen::Matrix4d(double)>& hamiltonian_rad,
    const DecoherenceRates& rates, InterwellChannel channel,
    DensityMatrix& rho, double t_begin, double t_end, double max_step,
    const std::function<void(double, const DensityMatrix&)>& observer) {
  long n_steps = std::max(1L, static_cast<long>(
                                  std::ceil((t_end - t_begin) / max_step)));
  double h = (t_end - t_begin) / static_cast<double>(n_steps);

  for (long step = 0; step < n_steps; ++step) {
    double t = t_begin + h * static_cast<double>(step);
    Eigen::Matrix4d h1 = hamiltonian_rad(t);
    Eigen::Matrix4d h2 = hamiltonian_rad(t + 0.5 * h);
    Eigen::Matrix4d h3 = hamiltonian_rad(t + h);

    DensityMatrix k1 = master_rhs(h1, rates, channel, rho);
    DensityMatrix k2 = master_rhs(h2, rates, channel, rho + 0.5 * h * k1);
    DensityMatrix k3 = master_rhs(h2, rates, channel, rho + 0.5 * h * k2);
    DensityMatrix k4 = master_rhs(h3, rates, channel, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    rho = 0.5 * (rho + rho.adjoint()).eval();

    double trace = rho.trace().real();
    if (std::fabs(trace - 1.0) > kTraceDriftLimit)
      throw StepUnstable("trace drifted to " + std::to_string(trace) +
                         " at t = " + std::to_string(t + h) + " ns");
    if (observer) observer(t + h, rho);
  }
}

double evolve_max_step(const FourLevelModel& m, const DriveParams& d,
                       const DecoherenceRates& r) {
  // level differences, not absolute energies, set the oscillation rate
  // the commutator has to resolve; their modulation amplitude is the
  // slope spread times the drive amplitude
  double k_max = *std::max_element(m.slope.begin(), m.slope.end());
  double k_min = *std::min_element(m.slope.begin(), m.slope.end());
  double swing = (k_max - k_min) * d.phi_rf;
  double fastest = std::max(d.frequency, swing);
  double step = 1.0 / (64.0 * fastest);
  double max_rate = std::max({r.gamma1, r.gamma_inter, r.gamma2});
  if (max_rate > 0.0) step = std::min(step, 1.0 / (32.0 * max_rate));
  return step;
}

Trajectory evolve(const FourLevelModel& m, const DriveParams& d,
                  const DecoherenceRates& r, const DensityMatrix& rho0,
                  double sample_every) {
  validate(d);
  validate(r);
  require_valid_state(rho0);
  if (!(sample_every > 0.0))
    throw ValidationError("evolve: sample_every must be > 0");

  Trajectory traj;
  auto record = [&traj](double t, const DensityMatrix& rho) {
    traj.times.push_back(t);
    traj.p_right.push_back(right_well_population(rho));
    Eigen::Vector4d pops;
    for (int i = 0; i < 4; ++i) pops[i] = rho(i, i).real();
    traj.populations.push_back(pops);
    traj.purity.push_back((rho * rho).trace().real());
  };

  DensityMatrix rho = rho0;
  record(0.0, rho);

  InterwellChannel channel = interwell_direction(m);
  double next_sample = sample_every;
  auto observer = [&](double t, const DensityMatrix& state) {
    if (t + 1e-12 >= next_sample) {
      record(t, state);
      while (next_sample <= t + 1e-12) next_sample += sample_every;
    }
  };
  auto ham = [&m, &d](double t) { return hamiltonian_at(m, d, t); };
  integrate_master(ham, r, channel, rho, 0.0, d.duration,
                   evolve_max_step(m, d, r), observer);
  traj.final_state = rho;
  return traj;
}

double right_well_population(const DensityMatrix& rho) {
  double p = rho(kState1R, kState1R).real() + rho(kState0R, kState0R).real();
  return std::clamp(p, 0.0, 1.0);
}

double simulate_protocol(const FourLevelModel& m, const DriveParams& d,
                         const DecoherenceRates& r) {
  validate(d);
  validate(r);

  DensityMatrix rho;
  switch (interwell_direction(m)) {
    case InterwellChannel::TowardRight:
      rho = pure_state(kState0R);
      break;
    case InterwellChannel::TowardLeft:
      rho = pure_state(kState0L);
      break;
    case InterwellChannel::Split:
      rho = 0.5 * (pure_state(kState0R) + pure_state(kState0L));
      break;
  }

  double window = std::min(5.0 / d.frequency, d.duration);
  double window_begin = d.duration - window;
  double weighted_sum = 0.0;
  double weight = 0.0;
  double prev_t = 0.0;
  auto observer = [&](double t, const DensityMatrix& state) {
    if (t > window_begin) {
      double dt = t - std::max(prev_t, window_begin);
      weighted_sum += right_well_population(state) * dt;
      weight += dt;
    }
    prev_t = t;
  };
  auto ham = [&m, &d](double t) { return hamiltonian_at(m, d, t); };
  integrate_master(ham, r, interwell_direction(m), rho, 0.0, d.duration,
                   evolve_max_step(m, d, r), observer);
  return weight > 0.0 ? std::clamp(weighted_sum / weight, 0.0, 1.0)
                      : right_well_population(rho);
}

}  // namespace squidsim
