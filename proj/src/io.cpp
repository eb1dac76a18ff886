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

#include "squidsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "squidsim/errors.hpp"

namespace squidsim {

namespace {

void append_header(std::ostringstream& out, const std::string& hash) {
  if (!hash.empty()) out << "# config_hash = " << hash << "\n";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string diagram_to_csv(const LevelDiagram& d, const std::string& hash) {
  std::ostringstream out;
  append_header(out, hash);
  out << "bias,level_index,energy_GHz,side,intrawell_index\n";
  for (size_t i = 0; i < d.biases.size(); ++i) {
    const EnergySpectrum& s = d.spectra[i];
    for (size_t l = 0; l < s.energies.size(); ++l) {
      const char* side = s.labels.empty() ? "?" : to_string(s.labels[l].side);
      int idx = s.labels.empty() ? 0 : s.labels[l].intrawell_index;
      out << format_number(d.biases[i]) << "," << l << ","
          << format_number(s.energies[l]) << "," << side << "," << idx << "\n";
    }
  }
  return out.str();
}

std::string trajectory_to_csv(const Trajectory& t, const std::string& hash) {
  std::ostringstream out;
  append_header(out, hash);
  out << "t_ns,p_right,p_1R,p_1L,p_0R,p_0L,purity\n";
  for (size_t i = 0; i < t.times.size(); ++i) {
    out << format_number(t.times[i]) << "," << format_number(t.p_right[i]);
    for (int x = 0; x < 4; ++x) out << "," << format_number(t.populations[i][x]);
    out << "," << format_number(t.purity[i]) << "\n";
  }
  return out.str();
}

std::string scan_to_csv(const BiasScan& base, const BiasScan* with_mw,
                        const std::string& hash) {
  std::ostringstream out;
  append_header(out, hash);
  out << "bias,p_right_no_mw";
  if (with_mw) out << ",p_right_mw";
  out << "\n";
  for (size_t i = 0; i < base.bias.size(); ++i) {
    out << format_number(base.bias[i]) << "," << format_number(base.p_right[i]);
    if (with_mw) out << "," << format_number(with_mw->p_right[i]);
    out << "\n";
  }
  return out.str();
}

std::string grid_to_csv(const SweepGrid& g, const std::string& hash) {
  std::ostringstream out;
  append_header(out, hash);
  out << "bias\\power_dBm";
  for (double p : g.power) out << "," << format_number(p);
  out << "\n";
  for (size_t i = 0; i < g.bias.size(); ++i) {
    out << format_number(g.bias[i]);
    for (size_t j = 0; j < g.power.size(); ++j)
      out << "," << format_number(g.values(i, j));
    out << "\n";
  }
  return out.str();
}

ordered_json model_to_json(const FourLevelModel& m) {
  static const char* names[4] = {"1R", "1L", "0R", "0L"};
  ordered_json j;
  j["reference_bias"] = m.reference_bias;
  for (int x = 0; x < 4; ++x) {
    j["energy0_GHz"][names[x]] = m.energy0[x];
    j["slope_GHz_per_Phi0"][names[x]] = m.slope[x];
  }
  j["delta00_GHz"] = m.delta00;
  j["delta01_GHz"] = m.delta01;
  j["delta11_GHz"] = m.delta11;
  return j;
}

ordered_json grid_to_json(const SweepGrid& g, const std::string& hash,
                          const std::string& config_echo) {
  ordered_json j;
  j["config_hash"] = hash;
  j["solver"] = g.solver_name;
  j["shots"] = g.shots;
  j["noise_seed"] = g.noise_seed;
  j["noisy"] = g.noisy;
  j["bias"] = g.bias;
  j["power_dBm"] = g.power;
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < g.values.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j2 = 0; j2 < g.values.cols(); ++j2) {
      double v = g.values(i, j2);
      if (std::isnan(v))
        row.push_back(nullptr);
      else
        row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  j["p_right"] = std::move(rows);
  j["failures"] = g.failures;
  ordered_json prov = ordered_json::array();
  for (int i = 0; i < g.values.rows(); ++i) {
    // provenance is uniform per run except for failed cells; store the
    // distinct values per row to keep the document compact
    ordered_json row = ordered_json::array();
    for (int j2 = 0; j2 < g.values.cols(); ++j2)
      row.push_back(g.cell_provenance(i, j2));
    prov.push_back(std::move(row));
  }
  j["provenance"] = std::move(prov);
  j["config"] = config_echo;
  return j;
}

ordered_json report_to_json(const FeatureReport& r, const std::string& hash) {
  ordered_json j;
  j["config_hash"] = hash;
  auto feature_array = [](const std::vector<Feature>& fs) {
    ordered_json arr = ordered_json::array();
    for (const auto& f : fs) {
      ordered_json e;
      e["bias"] = f.bias;
      e["power_dBm"] = f.power;
      e["population"] = f.population;
      if (f.photon_n)
        e["n"] = *f.photon_n;
      else
        e["n"] = nullptr;
      arr.push_back(std::move(e));
    }
    return arr;
  };
  j["peaks"] = feature_array(r.peaks);
  j["dips"] = feature_array(r.dips);
  ordered_json inv = ordered_json::array();
  for (const auto& c : r.inversions) {
    ordered_json e;
    e["bias"] = c.bias;
    e["power_dBm"] = c.power;
    e["population"] = c.population;
    e["ground_side"] = to_string(c.ground_side);
    inv.push_back(std::move(e));
  }
  j["inversions"] = std::move(inv);
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + p.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("write to " + path + " failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace squidsim
