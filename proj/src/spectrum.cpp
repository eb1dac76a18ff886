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

#include "squidsim/spectrum.hpp"

#include <lapacke.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <thread>

#include "squidsim/constants.hpp"
#include "squidsim/errors.hpp"
#include "squidsim/threads.hpp"

namespace squidsim {

namespace {

constexpr double kTargetResolution = 2.5e-4;  // grid step [Phi0]
constexpr double kWindowMargin = 0.35;        // window beyond bias range [Phi0]
constexpr double kConvergenceTol = 1e-3;      // level shift on doubling [GHz]
constexpr double kDelocalizedLow = 0.25;      // left-weight band for
constexpr double kDelocalizedHigh = 0.75;     // Delocalized labels
constexpr double kFitWeight = 0.9;            // localization cut for line fits
constexpr int kCrossingExclusion = 3;         // grid steps dropped at crossings

/// Kinetic prefactor K [GHz] of -K d^2/dphi^2 for a particle of mass C.
double kinetic_scale(double capacitance) {
  using namespace constants;
  return hbar * hbar / (2.0 * capacitance * phi0 * phi0) / planck / 1e9;
}

void validate_grid(const EigenGridSpec& g) {
  if (!(g.phi_min < g.phi_max))
    throw ValidationError("grid: phi_min must be < phi_max");
  if (g.n_points < 201)
    throw ValidationError("grid: n_points must be >= 201");
  if (g.n_levels < 1 || g.n_levels > g.n_points / 10)
    throw ValidationError("grid: need 1 <= n_levels <= n_points / 10");
}

/// Banded Hamiltonian (lower storage, bandwidth 2) of the fourth-order
/// central stencil -(-1, 16, -30, 16, -1)/(12 h^2) with hard walls.
struct BandedHamiltonian {
  std::vector<double> ab;  // (kd+1) x n, column-major lower
  int n;
  static constexpr int kd = 2;
};

BandedHamiltonian build_hamiltonian(const CircuitParams& p,
                                    const EigenGridSpec& g, int n_points) {
  double h = (g.phi_max - g.phi_min) / (n_points + 1);
  double kin = kinetic_scale(p.capacitance) / (12.0 * h * h);
  BandedHamiltonian b;
  b.n = n_points;
  b.ab.assign(static_cast<size_t>(3) * n_points, 0.0);
  for (int j = 0; j < n_points; ++j) {
    b.ab[3 * j + 0] = 30.0 * kin + potential(p, g.phi_min + (j + 1) * h);
    if (j + 1 < n_points) b.ab[3 * j + 1] = -16.0 * kin;
    if (j + 2 < n_points) b.ab[3 * j + 2] = kin;
  }
  return b;
}

/// Eigenvalues of (A - sigma I) below zero, counted through the inertia
/// of an unpivoted banded LDL^T pass (Sturm sequence for bandwidth 2).
int count_below(const BandedHamiltonian& b, double sigma, double tiny) {
  int count = 0;
  double dm1 = 1.0, dm2 = 1.0;  // d_{i-1}, d_{i-2}
  double lm1 = 0.0;             // L(i-1, i-2)
  for (int i = 0; i < b.n; ++i) {
    double s1 = i >= 1 ? b.ab[3 * (i - 1) + 1] : 0.0;
    double s2 = i >= 2 ? b.ab[3 * (i - 2) + 2] : 0.0;
    double li2 = i >= 2 ? s2 / dm2 : 0.0;
    double li1 = i >= 1 ? (s1 - li2 * dm2 * lm1) / dm1 : 0.0;
    double d = (b.ab[3 * i] - sigma) - li1 * li1 * dm1 - li2 * li2 * dm2;
    if (std::fabs(d) < tiny) d = -tiny;
    if (d < 0.0) ++count;
    dm2 = dm1;
    lm1 = li1;
    dm1 = d;
  }
  return count;
}

/// Lowest n_levels eigenvalues by index bisection on the Sturm count.
std::vector<double> banded_eigenvalues(const BandedHamiltonian& b,
                                       int n_levels) {
  double glo = std::numeric_limits<double>::max();
  double ghi = std::numeric_limits<double>::lowest();
  for (int i = 0; i < b.n; ++i) {
    double r = 0.0;
    if (i >= 1) r += std::fabs(b.ab[3 * (i - 1) + 1]);
    if (i >= 2) r += std::fabs(b.ab[3 * (i - 2) + 2]);
    if (i + 1 < b.n) r += std::fabs(b.ab[3 * i + 1]);
    if (i + 2 < b.n) r += std::fabs(b.ab[3 * i + 2]);
    glo = std::min(glo, b.ab[3 * i] - r);
    ghi = std::max(ghi, b.ab[3 * i] + r);
  }
  double scale = std::max(std::fabs(glo), std::fabs(ghi));
  double tiny = 1e-280 * std::max(1.0, scale);
  constexpr double kAbsTol = 1e-8;  // GHz

  std::vector<double> w(n_levels);
  double floor_bound = glo;
  for (int j = 0; j < n_levels; ++j) {
    double lo = floor_bound, hi = ghi;
    while (hi - lo > kAbsTol + 8.0 * std::numeric_limits<double>::epsilon() *
                                     std::max(std::fabs(lo), std::fabs(hi))) {
      double mid = 0.5 * (lo + hi);
      if (count_below(b, mid, tiny) >= j + 1)
        hi = mid;
      else
        lo = mid;
    }
    w[j] = 0.5 * (lo + hi);
    floor_bound = lo;  // eigenvalues are sought in ascending order
  }
  return w;
}

/// y = A x for the banded Hamiltonian.
void banded_multiply(const BandedHamiltonian& b, const double* x, double* y) {
  for (int i = 0; i < b.n; ++i) {
    double acc = b.ab[3 * i + 0] * x[i];
    if (i + 1 < b.n) acc += b.ab[3 * i + 1] * x[i + 1];
    if (i + 2 < b.n) acc += b.ab[3 * i + 2] * x[i + 2];
    if (i >= 1) acc += b.ab[3 * (i - 1) + 1] * x[i - 1];
    if (i >= 2) acc += b.ab[3 * (i - 2) + 2] * x[i - 2];
    y[i] = acc;
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Inverse iteration on the banded matrix for each eigenvalue, with
/// Gram-Schmidt orthogonalization inside near-degenerate clusters.
/// Returns vectors column by column in z (n x n_levels).
void banded_eigenvectors(const BandedHamiltonian& b,
                         const std::vector<double>& w, std::vector<double>& z) {
  constexpr double kClusterGap = 1e-4;  // GHz
  const int n = b.n;
  const int n_levels = static_cast<int>(w.size());
  z.assign(static_cast<size_t>(n) * n_levels, 0.0);

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    scale = std::max(scale, std::fabs(b.ab[3 * i]) +
                                2.0 * std::fabs(b.ab[3 * i + 1]) +
                                2.0 * std::fabs(b.ab[3 * i + 2]));

  // general-band LU storage for dgbtrf: kl = ku = 2, ldab = 2*kl+ku+1
  const int kl = 2, ku = 2, ldab = 2 * kl + ku + 1;
  std::vector<double> lu(static_cast<size_t>(ldab) * n);
  std::vector<lapack_int> ipiv(n);
  std::vector<double> x(n), y(n);

  for (int l = 0; l < n_levels; ++l) {
    double shift = w[l];
    for (int attempt = 0; attempt < 3; ++attempt) {
      // band matrix in dgbtrf layout, rows kl..2*kl+ku of each column
      std::fill(lu.begin(), lu.end(), 0.0);
      for (int j = 0; j < n; ++j) {
        lu[static_cast<size_t>(j) * ldab + kl + ku] =
            b.ab[3 * j] - shift;                                   // (j, j)
        if (j + 1 < n) {
          lu[static_cast<size_t>(j) * ldab + kl + ku + 1] = b.ab[3 * j + 1];
          lu[static_cast<size_t>(j + 1) * ldab + kl + ku - 1] = b.ab[3 * j + 1];
        }
        if (j + 2 < n) {
          lu[static_cast<size_t>(j) * ldab + kl + ku + 2] = b.ab[3 * j + 2];
          lu[static_cast<size_t>(j + 2) * ldab + kl + ku - 2] = b.ab[3 * j + 2];
        }
      }
      lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku,
                                       lu.data(), ldab, ipiv.data());
      if (info > 0) {
        // exactly singular pivot: nudge the shift by a few ulps of scale
        shift += scale * 1e-13 * (attempt + 1);
        continue;
      }
      if (info < 0)
        throw ConvergenceFailure("band factorization failed (dgbtrf)");

      // deterministic pseudo-random start vector
      for (int i = 0; i < n; ++i) {
        std::uint64_t r = splitmix64(static_cast<std::uint64_t>(l) * 0x51ed270bULL + i);
        x[i] = static_cast<double>(r >> 11) * 0x1.0p-53 - 0.5;
      }

      bool converged = false;
      for (int iter = 0; iter < 6 && !converged; ++iter) {
        lapack_int si = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1,
                                       lu.data(), ldab, ipiv.data(), x.data(),
                                       n);
        if (si != 0)
          throw ConvergenceFailure("band solve failed (dgbtrs)");
        // orthogonalize against earlier members of the same cluster
        for (int m = l - 1; m >= 0 && w[l] - w[m] < kClusterGap; --m) {
          const double* v = &z[static_cast<size_t>(m) * n];
          double dot = 0.0;
          for (int i = 0; i < n; ++i) dot += v[i] * x[i];
          for (int i = 0; i < n; ++i) x[i] -= dot * v[i];
        }
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += x[i] * x[i];
        norm = std::sqrt(norm);
        if (norm == 0.0) break;  // start vector was in the cluster span
        for (int i = 0; i < n; ++i) x[i] /= norm;

        banded_multiply(b, x.data(), y.data());
        double residual = 0.0;
        for (int i = 0; i < n; ++i) {
          double ri = y[i] - w[l] * x[i];
          residual += ri * ri;
        }
        converged = std::sqrt(residual) < 1e-10 * scale;
      }
      if (converged) {
        std::copy(x.begin(), x.end(), z.begin() + static_cast<size_t>(l) * n);
        break;
      }
      if (attempt == 2)
        throw ConvergenceFailure("inverse iteration failed for level " +
                                 std::to_string(l));
      shift += scale * 1e-13;
    }
  }
}

std::vector<double> solve_banded(BandedHamiltonian& b, int n_levels,
                                 std::vector<double>* z) {
  std::vector<double> w = banded_eigenvalues(b, n_levels);
  if (z) banded_eigenvectors(b, w, *z);
  return w;
}

std::vector<double> eigenvalues_only(const CircuitParams& p,
                                     const EigenGridSpec& g, int n_points) {
  BandedHamiltonian b = build_hamiltonian(p, g, n_points);
  return solve_banded(b, g.n_levels, nullptr);
}

void assign_labels(EnergySpectrum& s) {
  s.labels.assign(s.energies.size(), WellLabel{});
  int count_left = 0, count_right = 0, count_deloc = 0;
  for (size_t l = 0; l < s.energies.size(); ++l) {
    double w = s.left_weight[l];
    WellLabel lab;
    if (w > kDelocalizedHigh) {
      lab.side = WellSide::Left;
      lab.intrawell_index = count_left++;
    } else if (w < kDelocalizedLow) {
      lab.side = WellSide::Right;
      lab.intrawell_index = count_right++;
    } else {
      lab.side = WellSide::Delocalized;
      lab.intrawell_index = count_deloc++;
    }
    s.labels[l] = lab;
  }
}

/// Diabatic branch line E(b) = value + slope * (b - ref).
struct BranchLine {
  double value = 0.0;
  double slope = 0.0;
  double ref = 0.0;
  double at(double b) const { return value + slope * (b - ref); }
};

double crossing_bias(const BranchLine& x, const BranchLine& y) {
  double dk = x.slope - y.slope;
  if (std::fabs(dk) < 1e-12)
    throw NoCrossingFound("diabatic branches are parallel");
  return x.ref + (y.at(x.ref) - x.at(x.ref)) / dk;
}

struct BranchPoint {
  double bias;
  double energy;
};

BranchLine fit_line(const std::vector<BranchPoint>& pts, double ref,
                    const char* branch_name) {
  if (pts.size() < 2)
    throw BranchAmbiguity(std::string("branch ") + branch_name +
                          " has fewer than 2 localized points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : pts) {
    double x = pt.bias - ref;
    sx += x;
    sy += pt.energy;
    sxx += x * x;
    sxy += x * pt.energy;
  }
  double n = static_cast<double>(pts.size());
  double denom = n * sxx - sx * sx;
  if (std::fabs(denom) < 1e-30)
    throw BranchAmbiguity(std::string("branch ") + branch_name +
                          " is degenerate in bias");
  BranchLine line;
  line.slope = (n * sxy - sx * sy) / denom;
  line.value = (sy - line.slope * sx) / n;
  line.ref = ref;
  return line;
}

const char* kBranchNames[4] = {"1R", "1L", "0R", "0L"};

/// (side, intrawell) key of each diabatic branch, in DiabaticIndex order.
constexpr std::pair<WellSide, int> kBranchKeys[4] = {
    {WellSide::Right, 1},  // 1R
    {WellSide::Left, 1},   // 1L
    {WellSide::Right, 0},  // 0R
    {WellSide::Left, 0},   // 0L
};

/// Half the minimal adiabatic gap at the avoided crossing of two branch
/// lines. The gap^2 of a two-level crossing is exactly quadratic in
/// bias, so a parabola through the three grid points nearest the
/// minimum resolves splittings far below the grid resolution.
double half_gap_at_crossing(const LevelDiagram& d, const BranchLine& x,
                            const BranchLine& y, const char* name) {
  double b_star = crossing_bias(x, y);
  if (b_star < d.biases.front() || b_star > d.biases.back())
    throw NoCrossingFound(std::string("crossing ") + name +
                          " lies outside the diagram bias range");

  size_t n = d.biases.size();
  std::vector<double> gap(n);
  for (size_t j = 0; j < n; ++j) {
    double b = d.biases[j];
    double target = 0.5 * (x.at(b) + y.at(b));
    const auto& e = d.spectra[j].energies;
    double best = std::numeric_limits<double>::max();
    double g = std::numeric_limits<double>::max();
    for (size_t m = 0; m + 1 < e.size(); ++m) {
      double mid = 0.5 * (e[m] + e[m + 1]);
      if (std::fabs(mid - target) < best) {
        best = std::fabs(mid - target);
        g = e[m + 1] - e[m];
      }
    }
    gap[j] = g;
  }

  size_t jmin = std::min_element(gap.begin(), gap.end()) - gap.begin();
  if (jmin == 0 || jmin + 1 == n)
    throw NoCrossingFound(std::string("gap minimum for ") + name +
                          " sits on the diagram edge");

  double f0 = gap[jmin] * gap[jmin];
  double fm = gap[jmin - 1] * gap[jmin - 1];
  double fp = gap[jmin + 1] * gap[jmin + 1];
  double a = 0.5 * (fp + fm - 2.0 * f0);
  double b = 0.5 * (fp - fm);
  double min_sq = f0;
  if (a > 0.0) min_sq = f0 - b * b / (4.0 * a);
  if (min_sq < 0.0) min_sq = 0.0;
  return 0.5 * std::sqrt(min_sq);
}

}  // namespace

EigenGridSpec default_grid(double bias_min, double bias_max, int n_levels) {
  EigenGridSpec g;
  g.phi_min = bias_min - kWindowMargin;
  g.phi_max = bias_max + kWindowMargin;
  double width = g.phi_max - g.phi_min;
  g.n_points = std::max(201, static_cast<int>(std::ceil(width / kTargetResolution)));
  g.n_levels = n_levels;
  return g;
}

namespace {

/// small-oscillation level spacing in the well (or the bare LC spacing
/// when the potential is monostable)
double well_frequency(const CircuitParams& p) {
  try {
    WellGeometry w = find_wells(p);
    double curvature = potential_curvature(p, w.right_min);
    return std::sqrt(2.0 * kinetic_scale(p.capacitance) * curvature);
  } catch (const NoDoubleWell&) {
    return lc_frequency(p);
  }
}

}  // namespace

int recommended_levels(const CircuitParams& p, double f_drive, int n_max) {
  validate(p);
  double span = (n_max + 0.5) * f_drive;
  int levels = static_cast<int>(std::ceil(span / well_frequency(p))) + 8;
  return std::clamp(levels, 8, 200);
}

EigenGridSpec default_grid(const CircuitParams& p, double bias_min,
                           double bias_max, int n_levels) {
  CircuitParams centered = p;
  centered.phi_q = 0.5 * (bias_min + bias_max);

  // kinetic span of the ladder, plus the extra depth the bias tilt
  // gives the lower well at the window edges
  double span = (n_levels + 2) * well_frequency(centered);
  auto well_floor = [&p](double bias) -> double {
    CircuitParams q = p;
    q.phi_q = bias;
    try {
      WellGeometry w = find_wells(q);
      return std::min(w.u_left, w.u_right);
    } catch (const NoDoubleWell&) {
      return potential(q, q.phi_q);
    }
  };
  double edge_floor = std::min(well_floor(bias_min), well_floor(bias_max));
  double center_floor = well_floor(centered.phi_q);
  if (center_floor > edge_floor) span += center_floor - edge_floor;

  // widen the window until the hard walls sit safely above the ladder;
  // states brushing the wall converge only linearly in the grid step
  double e_max = edge_floor + span;
  double headroom = 0.15 * span + 10.0;
  double margin = kWindowMargin;
  while (margin < 0.55) {
    CircuitParams lo = p, hi = p;
    lo.phi_q = bias_min;
    hi.phi_q = bias_max;
    double wall = std::min(potential(lo, bias_min - margin),
                           potential(hi, bias_max + margin));
    if (wall >= e_max + headroom) break;
    margin += 0.01;
  }

  EigenGridSpec g;
  g.phi_min = bias_min - margin;
  g.phi_max = bias_max + margin;
  g.n_levels = n_levels;

  // resolve the shortest local de Broglie wavelength in that span; the
  // fourth-order stencil keeps ample margin at 48 points per wavelength
  double lambda_min =
      constants::two_pi * std::sqrt(kinetic_scale(p.capacitance) / span);
  double h = std::clamp(lambda_min / 48.0, 2e-5, kTargetResolution);
  g.n_points = std::max(
      201, static_cast<int>(std::ceil((g.phi_max - g.phi_min) / h)));
  if (g.n_levels > g.n_points / 10) g.n_points = 10 * g.n_levels;
  return g;
}

const char* to_string(WellSide s) {
  switch (s) {
    case WellSide::Left: return "L";
    case WellSide::Right: return "R";
    case WellSide::Delocalized: return "D";
  }
  return "?";
}

EnergySpectrum solve_eigen(const CircuitParams& p, const EigenGridSpec& g,
                           bool check_convergence) {
  validate(p);
  validate_grid(g);

  int n = g.n_points;
  double h = (g.phi_max - g.phi_min) / (n + 1);

  EnergySpectrum s;
  s.phi.resize(n);
  s.dphi = h;
  for (int i = 0; i < n; ++i) s.phi[i] = g.phi_min + (i + 1) * h;

  BandedHamiltonian b = build_hamiltonian(p, g, n);
  std::vector<double> z;
  std::vector<double> w = solve_banded(b, g.n_levels, &z);

  s.energies = w;
  s.wavefunctions.resize(g.n_levels);
  double norm = 1.0 / std::sqrt(h);
  for (int l = 0; l < g.n_levels; ++l) {
    Eigen::VectorXd psi(n);
    for (int i = 0; i < n; ++i) psi[i] = z[static_cast<size_t>(l) * n + i] * norm;
    // deterministic sign: largest-magnitude sample positive
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::fabs(psi[i]) > std::fabs(psi[imax])) imax = i;
    if (psi[imax] < 0.0) psi = -psi;
    s.wavefunctions[l] = std::move(psi);
  }

  if (check_convergence) {
    // near-degenerate levels may swap order between resolutions, so each
    // coarse level is compared against the nearest fine level
    auto w2 = eigenvalues_only(p, g, 2 * n);
    for (int l = 0; l < g.n_levels; ++l) {
      double shift = std::numeric_limits<double>::max();
      for (int j = std::max(0, l - 1);
           j <= std::min(g.n_levels - 1, l + 1); ++j)
        shift = std::min(shift, std::fabs(w2[j] - s.energies[l]));
      if (shift > kConvergenceTol)
        throw GridTooCoarse(
            "level " + std::to_string(l) + " shifts by " +
            std::to_string(shift) +
            " GHz on grid doubling (n_points = " + std::to_string(n) + ")");
    }
  }
  return s;
}

EnergySpectrum classify_states(EnergySpectrum s, const WellGeometry& wg) {
  size_t n_levels = s.energies.size();
  s.left_weight.assign(n_levels, 0.0);
  for (size_t l = 0; l < n_levels; ++l) {
    const Eigen::VectorXd& psi = s.wavefunctions[l];
    double w = 0.0;
    for (int i = 0; i < psi.size(); ++i) {
      if (s.phi[i] < wg.barrier_top) w += psi[i] * psi[i];
    }
    s.left_weight[l] = w * s.dphi;
  }
  assign_labels(s);
  return s;
}

LevelDiagram level_diagram(CircuitParams p, double bias_min, double bias_max,
                           int n_bias, const EigenGridSpec& g,
                           bool check_convergence) {
  if (n_bias < 1) throw ValidationError("level_diagram: n_bias must be >= 1");
  if (n_bias > 1 && !(bias_min < bias_max))
    throw ValidationError("level_diagram: bias_min must be < bias_max");

  LevelDiagram d;
  d.biases.resize(n_bias);
  d.spectra.resize(n_bias);
  for (int i = 0; i < n_bias; ++i)
    d.biases[i] = n_bias == 1
                      ? bias_min
                      : bias_min + (bias_max - bias_min) * i / (n_bias - 1);

  // per-bias solves are independent; assemble in bias order and report
  // the lowest-bias failure
  std::vector<std::string> errors(n_bias);
  std::vector<int> error_kind(n_bias, 0);
  auto solve_one = [&](int i) {
    CircuitParams q = p;
    q.phi_q = d.biases[i];
    try {
      WellGeometry wells = find_wells(q);
      d.spectra[i] =
          classify_states(solve_eigen(q, g, check_convergence), wells);
    } catch (const NoDoubleWell& e) {
      errors[i] = e.what();
      error_kind[i] = 1;
    } catch (const GridTooCoarse& e) {
      errors[i] = e.what();
      error_kind[i] = 2;
    } catch (const ConvergenceFailure& e) {
      errors[i] = e.what();
      error_kind[i] = 3;
    }
  };

  int n_workers = std::min(worker_count(), n_bias);
  if (n_workers <= 1) {
    for (int i = 0; i < n_bias; ++i) solve_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t)
      pool.emplace_back([&]() {
        for (int i = next.fetch_add(1); i < n_bias; i = next.fetch_add(1))
          solve_one(i);
      });
    for (auto& t : pool) t.join();
  }

  for (int i = 0; i < n_bias; ++i) {
    if (error_kind[i] == 0) continue;
    std::string msg =
        errors[i] + " [at bias " + std::to_string(d.biases[i]) + "]";
    if (error_kind[i] == 1) throw NoDoubleWell(msg);
    if (error_kind[i] == 2) throw GridTooCoarse(msg);
    throw ConvergenceFailure(msg);
  }
  return d;
}

FourLevelModel model_at_bias(const FourLevelModel& m, double bias) {
  FourLevelModel out = m;
  for (int x = 0; x < 4; ++x)
    out.energy0[x] = m.energy0[x] + m.slope[x] * (bias - m.reference_bias);
  out.reference_bias = bias;
  return out;
}

FourLevelModel extract_four_level_model(const LevelDiagram& d,
                                        std::optional<double> reference_bias) {
  if (d.biases.size() < 4)
    throw ValidationError("extraction needs a diagram with >= 4 biases");
  for (const auto& s : d.spectra)
    if (s.energies.size() < 4)
      throw ValidationError("extraction needs >= 4 levels per bias");

  double ref = reference_bias.value_or(
      0.5 * (d.biases.front() + d.biases.back()));
  double db = (d.biases.back() - d.biases.front()) /
              static_cast<double>(d.biases.size() - 1);

  auto collect = [&](int branch, const std::vector<double>& excluded) {
    auto [side, idx] = kBranchKeys[branch];
    std::vector<BranchPoint> pts;
    for (size_t j = 0; j < d.biases.size(); ++j) {
      bool near_crossing = false;
      for (double bc : excluded)
        if (std::fabs(d.biases[j] - bc) <=
            kCrossingExclusion * db * (1.0 + 1e-9))
          near_crossing = true;
      if (near_crossing) continue;
      const EnergySpectrum& s = d.spectra[j];
      for (size_t l = 0; l < s.energies.size(); ++l) {
        if (s.labels[l].side != side || s.labels[l].intrawell_index != idx)
          continue;
        double loc = side == WellSide::Left ? s.left_weight[l]
                                            : 1.0 - s.left_weight[l];
        if (loc > kFitWeight)
          pts.push_back({d.biases[j], s.energies[l]});
      }
    }
    return pts;
  };

  // First pass locates the crossings, second pass fits away from them.
  std::array<BranchLine, 4> lines;
  std::vector<double> excluded;
  for (int pass = 0; pass < 2; ++pass) {
    for (int x = 0; x < 4; ++x)
      lines[x] = fit_line(collect(x, excluded), ref, kBranchNames[x]);
    if (pass == 0) {
      excluded.clear();
      const std::pair<int, int> coupled[] = {{kState0R, kState0L},
                                             {kState1R, kState1L},
                                             {kState1R, kState0L},
                                             {kState1L, kState0R}};
      for (auto [a, b] : coupled) {
        try {
          excluded.push_back(crossing_bias(lines[a], lines[b]));
        } catch (const NoCrossingFound&) {
          // parallel branches never cross; nothing to exclude
        }
      }
    }
  }

  FourLevelModel m;
  m.reference_bias = ref;
  for (int x = 0; x < 4; ++x) {
    m.energy0[x] = lines[x].at(ref);
    m.slope[x] = lines[x].slope;
  }
  m.delta00 =
      half_gap_at_crossing(d, lines[kState0R], lines[kState0L], "Delta00");
  m.delta11 =
      half_gap_at_crossing(d, lines[kState1R], lines[kState1L], "Delta11");
  try {
    m.delta01 =
        half_gap_at_crossing(d, lines[kState1R], lines[kState0L], "Delta01");
  } catch (const NoCrossingFound&) {
    m.delta01 =
        half_gap_at_crossing(d, lines[kState1L], lines[kState0R], "Delta01");
  }
  return m;
}

std::vector<Resonance> predict_resonances(const LevelDiagram& d,
                                          double f_drive, int n_max) {
  if (n_max < 1) throw ValidationError("predict_resonances: n_max must be >= 1");
  std::vector<Resonance> hits;
  if (d.biases.size() < 2) return hits;

  size_t n_levels = d.spectra.front().energies.size();
  auto interwell_at = [&](size_t j, size_t lo, size_t hi) {
    const auto& labels = d.spectra[j].labels;
    WellSide a = labels[lo].side, b = labels[hi].side;
    return a != WellSide::Delocalized && b != WellSide::Delocalized && a != b;
  };

  for (size_t lo = 0; lo < n_levels; ++lo) {
    for (size_t hi = lo + 1; hi < n_levels; ++hi) {
      for (int n = 1; n <= n_max; ++n) {
        double target = n * f_drive;
        for (size_t j = 0; j + 1 < d.biases.size(); ++j) {
          double g0 = d.spectra[j].energies[hi] - d.spectra[j].energies[lo] -
                      target;
          double g1 = d.spectra[j + 1].energies[hi] -
                      d.spectra[j + 1].energies[lo] - target;
          bool hit = false;
          double bias = 0.0;
          size_t side_j = j;
          if (g0 == 0.0) {
            hit = true;
            bias = d.biases[j];
          } else if (g0 * g1 < 0.0) {
            double t = g0 / (g0 - g1);
            bias = d.biases[j] + t * (d.biases[j + 1] - d.biases[j]);
            side_j = t < 0.5 ? j : j + 1;
            hit = true;
          } else if (j + 2 == d.biases.size() && g1 == 0.0) {
            hit = true;
            bias = d.biases[j + 1];
            side_j = j + 1;
          }
          if (hit && interwell_at(side_j, lo, hi))
            hits.push_back({bias, n, static_cast<int>(lo),
                            static_cast<int>(hi)});
        }
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Resonance& a, const Resonance& b) {
    if (a.bias != b.bias) return a.bias < b.bias;
    if (a.n != b.n) return a.n < b.n;
    return std::tie(a.level_lower, a.level_upper) <
           std::tie(b.level_lower, b.level_upper);
  });
  return hits;
}

LevelDiagram synthesize_diagram(const FourLevelModel& m, double bias_min,
                                double bias_max, int n_bias) {
  if (n_bias < 2)
    throw ValidationError("synthesize_diagram: n_bias must be >= 2");
  LevelDiagram d;
  d.biases.resize(n_bias);
  d.spectra.resize(n_bias);
  for (int i = 0; i < n_bias; ++i) {
    double b = bias_min + (bias_max - bias_min) * i / (n_bias - 1);
    d.biases[i] = b;

    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    for (int x = 0; x < 4; ++x)
      h(x, x) = m.energy0[x] + m.slope[x] * (b - m.reference_bias);
    h(kState1R, kState1L) = h(kState1L, kState1R) = m.delta11;
    h(kState0R, kState0L) = h(kState0L, kState0R) = m.delta00;
    h(kState1R, kState0L) = h(kState0L, kState1R) = m.delta01;
    h(kState1L, kState0R) = h(kState0R, kState1L) = m.delta01;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
    EnergySpectrum s;
    s.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    s.left_weight.resize(4);
    for (int l = 0; l < 4; ++l) {
      Eigen::Vector4d v = es.eigenvectors().col(l);
      s.left_weight[l] = v[kState1L] * v[kState1L] + v[kState0L] * v[kState0L];
    }
    assign_labels(s);
    d.spectra[i] = std::move(s);
  }
  return d;
}

}  // namespace squidsim
