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

#include "squidsim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

#include "squidsim/errors.hpp"
#include "squidsim/lz.hpp"
#include "squidsim/threads.hpp"

namespace squidsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double bias_at(const SweepSpec& s, int i) {
  return s.n_bias == 1
             ? s.bias_min
             : s.bias_min + (s.bias_max - s.bias_min) * i / (s.n_bias - 1);
}

double power_at(const SweepSpec& s, int j) {
  return s.n_power == 1 ? s.p_min
                        : s.p_min + (s.p_max - s.p_min) * j / (s.n_power - 1);
}

/// splitmix64; decouples per-cell RNG streams from a single seed.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// xorshift-multiply uniform in [0, 1); portable and fast enough for
/// direct Bernoulli counting.
struct CellRng {
  std::uint64_t state;
  explicit CellRng(std::uint64_t seed) : state(seed == 0 ? 0x1234abcdULL : seed) {}
  double next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  }
};

// The sample nearest the symmetric point reports the degenerate value;
// "nearest" means within half a grid step of 0.5 Phi0.
bool at_degeneracy(double bias, double bias_step) {
  return std::fabs(bias - 0.5) < 0.5 * bias_step;
}

double static_ground_population(const LevelDiagram& d, size_t i,
                                double bias_step) {
  if (at_degeneracy(d.biases[i], bias_step)) return 0.5;
  switch (d.spectra[i].labels.front().side) {
    case WellSide::Right: return 1.0;
    case WellSide::Left: return 0.0;
    case WellSide::Delocalized: return 0.5;
  }
  return 0.5;
}

// Exact L/R symmetry for the degenerate column; line-fit rounding noise
// must not pick an interwell relaxation direction there.
void symmetrize(FourLevelModel& m) {
  double e1 = 0.5 * (m.energy0[kState1R] + m.energy0[kState1L]);
  double e0 = 0.5 * (m.energy0[kState0R] + m.energy0[kState0L]);
  m.energy0[kState1R] = m.energy0[kState1L] = e1;
  m.energy0[kState0R] = m.energy0[kState0L] = e0;
}

}  // namespace

double power_to_amplitude(double p_dbm, const PowerCalibration& cal) {
  if (!(cal.phi_rf_ref > 0.0))
    throw ValidationError("calibration: phi_rf_ref must be > 0");
  return cal.phi_rf_ref * std::pow(10.0, (p_dbm - cal.p_ref_dbm) / 20.0);
}

const char* to_string(SweepSolver s) {
  return s == SweepSolver::FullDynamics ? "full" : "rate";
}

void validate(const SweepSpec& s) {
  if (s.n_bias < 1 || s.n_power < 1)
    throw ValidationError("sweep: n_bias and n_power must be >= 1");
  if (s.n_bias > 1 && !(s.bias_min < s.bias_max))
    throw ValidationError("sweep: bias_min must be < bias_max");
  if (s.n_power > 1 && !(s.p_min < s.p_max))
    throw ValidationError("sweep: p_min must be < p_max");
  if (!(s.f > 0.0)) throw ValidationError("sweep: f must be > 0");
  if (!(s.duration > 0.0))
    throw ValidationError("sweep: duration must be > 0");
  if (s.shots < 0) throw ValidationError("sweep: shots must be >= 0");
}

BiasScan bias_scan_no_mw(const CircuitParams& p, const SweepSpec& spec,
                         const LevelDiagram* diagram) {
  validate(spec);
  LevelDiagram local;
  if (!diagram) {
    EigenGridSpec g = default_grid(spec.bias_min, spec.bias_max);
    local = level_diagram(p, spec.bias_min, spec.bias_max, spec.n_bias, g);
    diagram = &local;
  }
  double step = spec.n_bias > 1
                    ? (spec.bias_max - spec.bias_min) / (spec.n_bias - 1)
                    : 2e-9;
  BiasScan scan;
  scan.bias = diagram->biases;
  scan.p_right.resize(diagram->biases.size());
  for (size_t i = 0; i < diagram->biases.size(); ++i)
    scan.p_right[i] = static_ground_population(*diagram, i, step);
  return scan;
}

SweepGrid run_sweep(const CircuitParams& p, const SweepSpec& spec,
                    const PowerCalibration& cal, const DecoherenceRates& r,
                    const LevelDiagram* diagram) {
  validate(p);
  validate(spec);
  validate(r);

  LevelDiagram local;
  if (!diagram) {
    EigenGridSpec g = default_grid(spec.bias_min, spec.bias_max);
    local = level_diagram(p, spec.bias_min, spec.bias_max, spec.n_bias, g);
    diagram = &local;
  }

  SweepGrid grid;
  grid.solver_name = to_string(spec.solver);
  grid.bias.resize(spec.n_bias);
  grid.power.resize(spec.n_power);
  for (int i = 0; i < spec.n_bias; ++i) grid.bias[i] = bias_at(spec, i);
  for (int j = 0; j < spec.n_power; ++j) grid.power[j] = power_at(spec, j);
  grid.values = Eigen::MatrixXd::Constant(spec.n_bias, spec.n_power, kNaN);
  grid.provenance.assign(
      static_cast<size_t>(spec.n_bias) * spec.n_power, std::string());

  // The model wants a diagram spanning the interwell crossings; a narrow
  // or single-bias sweep re-extracts from a wider window around its
  // center instead.
  FourLevelModel model;
  std::string extraction_failure;
  try {
    model = extract_four_level_model(*diagram);
  } catch (const Error&) {
    try {
      double center = 0.5 * (spec.bias_min + spec.bias_max);
      EigenGridSpec wide_grid = default_grid(center - 0.015, center + 0.015);
      wide_grid.n_levels = diagram->spectra.empty()
                               ? 8
                               : static_cast<int>(
                                     diagram->spectra.front().energies.size());
      wide_grid.n_levels =
          std::clamp(wide_grid.n_levels, 8, wide_grid.n_points / 10);
      LevelDiagram wide = level_diagram(p, center - 0.015, center + 0.015, 61,
                                        wide_grid, false);
      model = extract_four_level_model(wide);
    } catch (const Error& e) {
      extraction_failure = std::string(e.type_name()) + ": " + e.what();
    }
  }

  double bias_step = spec.n_bias > 1
                         ? (spec.bias_max - spec.bias_min) / (spec.n_bias - 1)
                         : 1e-9;
  std::mutex failure_mutex;
  auto evaluate_cell = [&](int i, int j) {
    size_t flat = static_cast<size_t>(i) * spec.n_power + j;
    if (!extraction_failure.empty()) {
      grid.provenance[flat] = "failed: " + extraction_failure;
      std::lock_guard<std::mutex> lock(failure_mutex);
      grid.failures.push_back(std::to_string(i) + "," + std::to_string(j) +
                              ": " + extraction_failure);
      return;
    }
    FourLevelModel cell_model = model_at_bias(model, grid.bias[i]);
    if (at_degeneracy(grid.bias[i], bias_step)) symmetrize(cell_model);
    DriveParams drive{spec.f, power_to_amplitude(grid.power[j], cal),
                      spec.duration};
    try {
      double value;
      if (spec.solver == SweepSolver::RateEquation) {
        Eigen::Vector4d occ = rate_steady_state(cell_model, drive, r);
        value = occ[kState1R] + occ[kState0R];
      } else {
        value = simulate_protocol(cell_model, drive, r);
      }
      grid.values(i, j) = value;
      grid.provenance[flat] = grid.solver_name;
    } catch (const Error& e) {
      std::string cause = std::string(e.type_name()) + ": " + e.what();
      grid.provenance[flat] = "failed: " + cause;
      std::lock_guard<std::mutex> lock(failure_mutex);
      grid.failures.push_back(std::to_string(i) + "," + std::to_string(j) +
                              ": " + cause);
    }
  };

  int n_cells = spec.n_bias * spec.n_power;
  int n_workers = std::min(worker_count(), n_cells);
  if (n_workers <= 1) {
    for (int c = 0; c < n_cells; ++c)
      evaluate_cell(c / spec.n_power, c % spec.n_power);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&]() {
        for (int c = next.fetch_add(1); c < n_cells; c = next.fetch_add(1))
          evaluate_cell(c / spec.n_power, c % spec.n_power);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::sort(grid.failures.begin(), grid.failures.end());
  return grid;
}

SweepGrid add_shot_noise(const SweepGrid& grid, long shots,
                         std::uint64_t seed) {
  if (shots < 1) throw ValidationError("shot noise: shots must be >= 1");
  SweepGrid out = grid;
  out.shots = shots;
  out.noise_seed = seed;
  out.noisy = true;
  for (int i = 0; i < out.values.rows(); ++i) {
    for (int j = 0; j < out.values.cols(); ++j) {
      double p = grid.values(i, j);
      if (std::isnan(p)) continue;
      std::uint64_t cell = static_cast<std::uint64_t>(i) * grid.power.size() +
                           static_cast<std::uint64_t>(j);
      CellRng rng(mix64(seed ^ mix64(cell + 1)));
      long hits = 0;
      for (long s = 0; s < shots; ++s)
        if (rng.next() < p) ++hits;
      out.values(i, j) = static_cast<double>(hits) / static_cast<double>(shots);
    }
  }
  return out;
}

FeatureReport detect_features(const SweepGrid& grid, const BiasScan& baseline,
                              const LevelDiagram& diagram, double f) {
  if (baseline.bias.size() != grid.bias.size())
    throw ValidationError(
        "detect_features: grid and baseline bias axes differ");

  FeatureReport report;
  int n_bias = static_cast<int>(grid.bias.size());
  int n_power = static_cast<int>(grid.power.size());
  double bias_step =
      n_bias > 1 ? (grid.bias.back() - grid.bias.front()) / (n_bias - 1) : 0.0;

  std::vector<Resonance> resonances = predict_resonances(diagram, f, 3);
  auto nearest_n = [&](double bias) -> std::optional<int> {
    double best = std::numeric_limits<double>::max();
    std::optional<int> n;
    for (const auto& res : resonances) {
      double dist = std::fabs(res.bias - bias);
      if (dist < best) {
        best = dist;
        n = res.n;
      }
    }
    if (n && best <= 2.0 * bias_step) return n;
    return std::nullopt;
  };

  for (int j = 0; j < n_power; ++j) {
    for (int i = 0; i < n_bias; ++i) {
      double v = grid.values(i, j);
      if (std::isnan(v)) continue;
      double base = baseline.p_right[i];

      // peaks and dips: threshold against baseline plus bias-local extremum
      bool interior = i > 0 && i + 1 < n_bias;
      if (interior && !std::isnan(grid.values(i - 1, j)) &&
          !std::isnan(grid.values(i + 1, j))) {
        double left = grid.values(i - 1, j);
        double right = grid.values(i + 1, j);
        if (v - base > kFeatureThreshold && v > left && v > right)
          report.peaks.push_back(
              {grid.bias[i], grid.power[j], v, nearest_n(grid.bias[i])});
        if (base - v > kFeatureThreshold && v < left && v < right)
          report.dips.push_back(
              {grid.bias[i], grid.power[j], v, nearest_n(grid.bias[i])});
      }

      // inversion: excited-well (opposite to static ground) holds > 1/2
      if (base < 0.25) {
        if (v > 0.5)
          report.inversions.push_back(
              {grid.bias[i], grid.power[j], v, WellSide::Left});
      } else if (base > 0.75) {
        if (1.0 - v > 0.5)
          report.inversions.push_back(
              {grid.bias[i], grid.power[j], 1.0 - v, WellSide::Right});
      }
    }
  }
  return report;
}

}  // namespace squidsim
