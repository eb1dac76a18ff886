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

#include "squidsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "squidsim/errors.hpp"

namespace squidsim {

void validate(const PlotSpec& spec) {
  if (!(spec.color_min < spec.color_max))
    throw ValidationError("plot: color scale bounds must be ordered");
}

PlotSpec default_heatmap_spec() {
  return {PlotKind::Heatmap, "MW power (dBm)", "flux bias (Phi0)", 0.0, 1.0};
}

PlotSpec default_levels_spec() {
  return {PlotKind::Lines, "flux bias (Phi0)", "E/h (GHz)", 0.0, 1.0};
}

PlotSpec default_scan_spec() {
  return {PlotKind::Lines, "flux bias (Phi0)", "P(R)", 0.0, 1.0};
}

namespace {

constexpr int kWidth = 880;
constexpr int kHeight = 620;
constexpr int kMarginLeft = 90;
constexpr int kMarginRight = 110;
constexpr int kMarginTop = 50;
constexpr int kMarginBottom = 70;

std::string num(double v, int digits = 2) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// viridis anchors, interpolated linearly
const int kViridis[][3] = {
    {68, 1, 84},    {71, 44, 122},  {59, 81, 139},  {44, 113, 142},
    {33, 144, 141}, {39, 173, 129}, {92, 200, 99},  {170, 220, 50},
    {253, 231, 37},
};

std::string color_of(double v) {
  v = std::clamp(v, 0.0, 1.0);
  constexpr int n = sizeof(kViridis) / sizeof(kViridis[0]);
  double x = v * (n - 1);
  int i = std::min(static_cast<int>(x), n - 2);
  double t = x - i;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(kViridis[i][0] * (1 - t) + kViridis[i + 1][0] * t)),
                static_cast<int>(std::lround(kViridis[i][1] * (1 - t) + kViridis[i + 1][1] * t)),
                static_cast<int>(std::lround(kViridis[i][2] * (1 - t) + kViridis[i + 1][2] * t)));
  return buf;
}

struct Axis {
  double lo, hi;
  double px0, px1;
  double to_px(double v) const {
    return lo == hi ? 0.5 * (px0 + px1)
                    : px0 + (v - lo) / (hi - lo) * (px1 - px0);
  }
};

std::vector<double> make_ticks(double lo, double hi, int target = 6) {
  std::vector<double> ticks;
  if (lo == hi) return {lo};
  double span = hi - lo;
  double raw = span / target;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  double first = std::ceil(lo / step) * step;
  for (double t = first; t <= hi + 1e-12 * span; t += step)
    ticks.push_back(std::fabs(t) < 1e-12 * span ? 0.0 : t);
  return ticks;
}

void open_svg(std::ostringstream& out, const std::string& title,
              const std::string& hash) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  if (!hash.empty()) out << "<!-- config_hash = " << hash << " -->\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"28\" font-family=\"sans-serif\" "
      << "font-size=\"17\" text-anchor=\"middle\">" << title << "</text>\n";
}

void draw_axes(std::ostringstream& out, const Axis& x, const Axis& y,
               const std::string& xlabel, const std::string& ylabel) {
  out << "<rect x=\"" << num(x.px0) << "\" y=\"" << num(y.px1) << "\" width=\""
      << num(x.px1 - x.px0) << "\" height=\"" << num(y.px0 - y.px1)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : make_ticks(x.lo, x.hi)) {
    double px = x.to_px(t);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(y.px0) << "\" x2=\""
        << num(px) << "\" y2=\"" << num(y.px0 + 6) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << num(y.px0 + 22)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << tick_label(t) << "</text>\n";
  }
  for (double t : make_ticks(y.lo, y.hi)) {
    double py = y.to_px(t);
    out << "<line x1=\"" << num(x.px0 - 6) << "\" y1=\"" << num(py)
        << "\" x2=\"" << num(x.px0) << "\" y2=\"" << num(py)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(x.px0 - 10) << "\" y=\"" << num(py + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"end\">"
        << tick_label(t) << "</text>\n";
  }
  out << "<text x=\"" << num(0.5 * (x.px0 + x.px1)) << "\" y=\""
      << num(y.px0 + 48)
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">"
      << xlabel << "</text>\n";
  out << "<text x=\"22\" y=\"" << num(0.5 * (y.px0 + y.px1))
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 22 "
      << num(0.5 * (y.px0 + y.px1)) << ")\">" << ylabel << "</text>\n";
}

}  // namespace

std::string heatmap_svg(const SweepGrid& grid, const std::string& title,
                        const std::string& hash, const PlotSpec& spec) {
  validate(spec);
  std::ostringstream out;
  open_svg(out, title, hash);
  auto normalized = [&spec](double v) {
    return (v - spec.color_min) / (spec.color_max - spec.color_min);
  };

  int nb = static_cast<int>(grid.bias.size());
  int np = static_cast<int>(grid.power.size());
  Axis x{grid.power.front(), grid.power.back(),
         static_cast<double>(kMarginLeft),
         static_cast<double>(kWidth - kMarginRight)};
  Axis y{grid.bias.front(), grid.bias.back(),
         static_cast<double>(kHeight - kMarginBottom),
         static_cast<double>(kMarginTop)};
  if (np == 1) { x.lo -= 0.5; x.hi += 0.5; }
  if (nb == 1) { y.lo -= 0.5; y.hi += 0.5; }

  double dpx = (x.px1 - x.px0) / np;
  double dpy = (y.px0 - y.px1) / nb;
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < np; ++j) {
      double v = grid.values(i, j);
      std::string fill = std::isnan(v) ? "#bbbbbb" : color_of(normalized(v));
      double px = x.px0 + j * dpx;
      double py = y.px0 - (i + 1) * dpy;
      out << "<rect x=\"" << num(px, 3) << "\" y=\"" << num(py, 3)
          << "\" width=\"" << num(dpx + 0.05, 3) << "\" height=\""
          << num(dpy + 0.05, 3) << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  draw_axes(out, x, y, spec.x_label, spec.y_label);

  // colorbar
  double cb_x = kWidth - kMarginRight + 30;
  double cb_top = kMarginTop, cb_h = kHeight - kMarginTop - kMarginBottom;
  const int strips = 64;
  for (int s = 0; s < strips; ++s) {
    double v = 1.0 - static_cast<double>(s) / (strips - 1);
    out << "<rect x=\"" << num(cb_x) << "\" y=\""
        << num(cb_top + s * cb_h / strips, 3) << "\" width=\"18\" height=\""
        << num(cb_h / strips + 0.05, 3) << "\" fill=\"" << color_of(v)
        << "\"/>\n";
  }
  out << "<rect x=\"" << num(cb_x) << "\" y=\"" << num(cb_top)
      << "\" width=\"18\" height=\"" << num(cb_h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double frac : {0.0, 0.5, 1.0}) {
    double py = cb_top + (1.0 - frac) * cb_h;
    double v = spec.color_min + frac * (spec.color_max - spec.color_min);
    out << "<text x=\"" << num(cb_x + 24) << "\" y=\"" << num(py + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << num(v, 1)
        << "</text>\n";
  }
  out << "<text x=\"" << num(cb_x + 9) << "\" y=\"" << num(cb_top - 10)
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">P(R)</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string levels_svg(const LevelDiagram& d,
                       const std::vector<Resonance>& resonances,
                       const std::string& title, const std::string& hash,
                       const PlotSpec& spec) {
  validate(spec);
  std::ostringstream out;
  open_svg(out, title, hash);

  double e_lo = 1e300, e_hi = -1e300;
  for (const auto& s : d.spectra) {
    e_lo = std::min(e_lo, s.energies.front());
    e_hi = std::max(e_hi, s.energies.back());
  }
  double pad = 0.05 * (e_hi - e_lo);
  Axis x{d.biases.front(), d.biases.back(), static_cast<double>(kMarginLeft),
         static_cast<double>(kWidth - kMarginRight)};
  Axis y{e_lo - pad, e_hi + pad, static_cast<double>(kHeight - kMarginBottom),
         static_cast<double>(kMarginTop)};

  size_t n_levels = d.spectra.front().energies.size();
  for (size_t l = 0; l < n_levels; ++l) {
    // color by the side the level spends most biases on
    int left = 0, right = 0;
    for (const auto& s : d.spectra) {
      if (s.labels.empty()) continue;
      if (s.labels[l].side == WellSide::Left) ++left;
      if (s.labels[l].side == WellSide::Right) ++right;
    }
    const char* color = left > right ? "#c03030" : (right > left ? "#3050c0" : "#4d4d4d");
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.4\" points=\"";
    for (size_t i = 0; i < d.biases.size(); ++i)
      out << num(x.to_px(d.biases[i])) << ","
          << num(y.to_px(d.spectra[i].energies[l])) << " ";
    out << "\"/>\n";
  }

  for (const auto& r : resonances) {
    double px = x.to_px(r.bias);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(y.px1) << "\" x2=\""
        << num(px) << "\" y2=\"" << num(y.px0)
        << "\" stroke=\"#808080\" stroke-dasharray=\"4,4\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << num(y.px1 - 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">n=" << r.n << "</text>\n";
  }
  draw_axes(out, x, y, spec.x_label, spec.y_label);
  out << "</svg>\n";
  return out.str();
}

std::string scan_svg(const BiasScan& baseline, const BiasScan* with_mw,
                     const std::string& title, const std::string& hash,
                     const PlotSpec& spec) {
  validate(spec);
  std::ostringstream out;
  open_svg(out, title, hash);
  Axis x{baseline.bias.front(), baseline.bias.back(),
         static_cast<double>(kMarginLeft),
         static_cast<double>(kWidth - kMarginRight)};
  Axis y{-0.05, 1.05, static_cast<double>(kHeight - kMarginBottom),
         static_cast<double>(kMarginTop)};

  if (with_mw) {
    out << "<polyline fill=\"none\" stroke=\"#3050c0\" stroke-width=\"1.6\" "
           "points=\"";
    for (size_t i = 0; i < with_mw->bias.size(); ++i)
      out << num(x.to_px(with_mw->bias[i])) << ","
          << num(y.to_px(with_mw->p_right[i])) << " ";
    out << "\"/>\n";
  }
  for (size_t i = 0; i < baseline.bias.size(); ++i)
    out << "<circle cx=\"" << num(x.to_px(baseline.bias[i])) << "\" cy=\""
        << num(y.to_px(baseline.p_right[i]))
        << "\" r=\"2.2\" fill=\"#c03030\"/>\n";

  double lx = kWidth - kMarginRight - 170, ly = kMarginTop + 14;
  out << "<circle cx=\"" << num(lx) << "\" cy=\"" << num(ly)
      << "\" r=\"2.2\" fill=\"#c03030\"/>"
      << "<text x=\"" << num(lx + 10) << "\" y=\"" << num(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">no MW</text>\n";
  if (with_mw) {
    out << "<line x1=\"" << num(lx - 8) << "\" y1=\"" << num(ly + 18)
        << "\" x2=\"" << num(lx + 6) << "\" y2=\"" << num(ly + 18)
        << "\" stroke=\"#3050c0\" stroke-width=\"1.6\"/>"
        << "<text x=\"" << num(lx + 10) << "\" y=\"" << num(ly + 22)
        << "\" font-family=\"sans-serif\" font-size=\"12\">with MW</text>\n";
  }
  draw_axes(out, x, y, spec.x_label, spec.y_label);
  out << "</svg>\n";
  return out.str();
}

}  // namespace squidsim
