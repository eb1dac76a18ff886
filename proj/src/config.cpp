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

#include "squidsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "squidsim/constants.hpp"
#include "squidsim/errors.hpp"

namespace squidsim {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct RawEntry {
  std::string value;
  int line;
};

using RawConfig = std::map<std::string, std::map<std::string, RawEntry>>;

RawConfig parse_ini(const std::string& text, const std::string& origin) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ParseError(origin + ":" + std::to_string(line_no) +
                         ": unterminated section header");
      section = lower(trim(s.substr(1, s.size() - 2)));
      if (section.empty())
        throw ParseError(origin + ":" + std::to_string(line_no) +
                         ": empty section name");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": expected key = value");
    if (section.empty())
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": key outside any [section]");
    std::string key = lower(trim(s.substr(0, eq)));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw ParseError(origin + ":" + std::to_string(line_no) + ": empty key");
    if (raw[section].count(key))
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": duplicate key '" + key + "'");
    raw[section][key] = {value, line_no};
  }
  return raw;
}

class SectionReader {
 public:
  SectionReader(RawConfig& raw, const std::string& origin) : raw_(raw), origin_(origin) {}

  bool has(const std::string& section, const std::string& key) const {
    auto s = raw_.find(section);
    return s != raw_.end() && s->second.count(key);
  }

  double number(const std::string& section, const std::string& key,
                double fallback) {
    auto* e = take(section, key);
    if (!e) return fallback;
    return to_number(*e, section, key);
  }

  std::optional<double> number_opt(const std::string& section,
                                   const std::string& key) {
    auto* e = take(section, key);
    if (!e) return std::nullopt;
    return to_number(*e, section, key);
  }

  long integer(const std::string& section, const std::string& key,
               long fallback) {
    auto* e = take(section, key);
    if (!e) return fallback;
    double v = to_number(*e, section, key);
    long n = static_cast<long>(std::llround(v));
    if (std::fabs(v - static_cast<double>(n)) > 1e-9)
      throw ParseError(origin_ + ":" + std::to_string(e->line) + ": " +
                       section + "." + key + " must be an integer");
    return n;
  }

  std::uint64_t unsigned64(const std::string& section, const std::string& key,
                           std::uint64_t fallback) {
    auto* e = take(section, key);
    if (!e) return fallback;
    try {
      if (!e->value.empty() && e->value[0] == '-') throw std::invalid_argument("sign");
      return std::stoull(e->value);
    } catch (...) {
      throw ParseError(origin_ + ":" + std::to_string(e->line) + ": " +
                       section + "." + key + " must be an unsigned integer");
    }
  }

  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback) {
    auto* e = take(section, key);
    return e ? e->value : fallback;
  }

  /// Every key must have been consumed; unknown keys are config mistakes.
  void finish() {
    for (const auto& [section, entries] : raw_)
      for (const auto& [key, entry] : entries)
        if (!consumed_.count(section + "." + key))
          throw ValidationError("unknown config key '" + section + "." + key +
                                "' (line " + std::to_string(entry.line) + ")");
  }

 private:
  const RawEntry* take(const std::string& section, const std::string& key) {
    auto s = raw_.find(section);
    if (s == raw_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    consumed_.insert(section + "." + key);
    return &k->second;
  }

  double to_number(const RawEntry& e, const std::string& section,
                   const std::string& key) {
    try {
      size_t pos = 0;
      double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      throw ParseError(origin_ + ":" + std::to_string(e.line) + ": " + section +
                       "." + key + " is not a number ('" + e.value + "')");
    }
  }

  RawConfig& raw_;
  std::string origin_;
  std::set<std::string> consumed_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

CircuitParams RunConfig::circuit() const {
  CircuitParams p;
  p.inductance = l_ph * 1e-12;
  p.capacitance = c_pf * 1e-12;
  p.phi_cjj = phi_cjj;
  p.phi_q = 0.5;
  if (ic_ua) {
    p.critical_current = *ic_ua * 1e-6;
  } else {
    double beta = beta_l_cfg.value_or(1.39);
    p.critical_current =
        beta * constants::phi0 / (constants::two_pi * p.inductance);
  }
  return p;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RawConfig raw = parse_ini(text, origin);
  SectionReader r(raw, origin);
  RunConfig cfg;

  if (r.has("circuit", "ic_ua") && r.has("circuit", "beta_l"))
    throw ValidationError(
        "circuit: give exactly one of ic_ua / beta_l, not both");
  cfg.l_ph = r.number("circuit", "l_ph", cfg.l_ph);
  cfg.c_pf = r.number("circuit", "c_pf", cfg.c_pf);
  cfg.ic_ua = r.number_opt("circuit", "ic_ua");
  cfg.beta_l_cfg = r.number_opt("circuit", "beta_l");
  cfg.phi_cjj = r.number("circuit", "phi_cjj", cfg.phi_cjj);

  cfg.f_ghz = r.number("drive", "f_ghz", cfg.f_ghz);
  cfg.drive_duration_ns =
      r.number("drive", "duration_ns", cfg.drive_duration_ns);

  cfg.rates.gamma1 = r.number("rates", "gamma1_per_ns", cfg.rates.gamma1);
  cfg.rates.gamma_inter =
      r.number("rates", "gamma_inter_per_ns", cfg.rates.gamma_inter);
  cfg.rates.gamma2 = r.number("rates", "gamma2_per_ns", cfg.rates.gamma2);

  cfg.calibration.p_ref_dbm =
      r.number("calibration", "p_ref_dbm", cfg.calibration.p_ref_dbm);
  cfg.calibration.phi_rf_ref =
      r.number("calibration", "phi_rf_ref", cfg.calibration.phi_rf_ref);

  cfg.sweep.bias_min = r.number("sweep", "bias_min", cfg.sweep.bias_min);
  cfg.sweep.bias_max = r.number("sweep", "bias_max", cfg.sweep.bias_max);
  cfg.sweep.n_bias =
      static_cast<int>(r.integer("sweep", "n_bias", cfg.sweep.n_bias));
  cfg.sweep.p_min = r.number("sweep", "p_min_dbm", cfg.sweep.p_min);
  cfg.sweep.p_max = r.number("sweep", "p_max_dbm", cfg.sweep.p_max);
  cfg.sweep.n_power =
      static_cast<int>(r.integer("sweep", "n_power", cfg.sweep.n_power));
  std::string solver = lower(r.text("sweep", "solver", "rate"));
  if (solver == "rate")
    cfg.sweep.solver = SweepSolver::RateEquation;
  else if (solver == "full")
    cfg.sweep.solver = SweepSolver::FullDynamics;
  else
    throw ValidationError("sweep.solver must be 'rate' or 'full', got '" +
                          solver + "'");
  cfg.sweep.duration = r.number("sweep", "duration_ns", cfg.sweep.duration);
  cfg.sweep.shots = r.integer("sweep", "shots", cfg.sweep.shots);
  cfg.seed = r.unsigned64("sweep", "seed", cfg.seed);
  cfg.sweep.f = cfg.f_ghz;

  cfg.out_dir = r.text("output", "dir", cfg.out_dir);
  std::string formats = lower(r.text("output", "formats", "csv,json,svg"));
  cfg.write_csv = formats.find("csv") != std::string::npos;
  cfg.write_json = formats.find("json") != std::string::npos;
  cfg.write_svg = formats.find("svg") != std::string::npos;

  r.finish();

  // re-check the physical invariants of the underlying types
  CircuitParams p = cfg.circuit();
  validate(p);
  if (!(cfg.f_ghz > 0.0)) throw ValidationError("drive: f_ghz must be > 0");
  if (!(cfg.drive_duration_ns > 0.0))
    throw ValidationError("drive: duration_ns must be > 0");
  validate(cfg.rates);
  if (!(cfg.calibration.phi_rf_ref > 0.0))
    throw ValidationError("calibration: phi_rf_ref must be > 0");
  validate(cfg.sweep);

  if (!double_well_regime(p)) {
    cfg.warnings.push_back(
        "beta_L = " + fmt(beta_l(p)) +
        " is outside the double-well window (1, 4.6)");
  }
  double f_lc = lc_frequency(p);
  if (f_lc < 0.25 * cfg.f_ghz) {
    cfg.warnings.push_back(
        "LC frequency " + fmt(f_lc) + " GHz is far below the drive at " +
        fmt(cfg.f_ghz) +
        " GHz; check the capacitance (c_pf = " + fmt(cfg.c_pf) +
        " may be meant in fF)");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string render_effective(const RunConfig& cfg) {
  std::ostringstream out;
  CircuitParams p = cfg.circuit();
  out << "[circuit]\n";
  out << "l_ph = " << fmt(cfg.l_ph) << "\n";
  out << "c_pf = " << fmt(cfg.c_pf) << "\n";
  if (cfg.ic_ua)
    out << "ic_ua = " << fmt(*cfg.ic_ua) << "\n";
  else
    out << "beta_l = " << fmt(cfg.beta_l_cfg.value_or(1.39)) << "\n";
  out << "phi_cjj = " << fmt(cfg.phi_cjj) << "\n";
  out << "# derived: beta_L_eff = " << fmt(beta_l(p))
      << ", Ic_eff_uA = " << fmt(effective_critical_current(p) * 1e6)
      << ", f_LC_GHz = " << fmt(lc_frequency(p)) << "\n";
  out << "[drive]\n";
  out << "f_ghz = " << fmt(cfg.f_ghz) << "\n";
  out << "duration_ns = " << fmt(cfg.drive_duration_ns) << "\n";
  out << "[rates]\n";
  out << "gamma1_per_ns = " << fmt(cfg.rates.gamma1) << "\n";
  out << "gamma_inter_per_ns = " << fmt(cfg.rates.gamma_inter) << "\n";
  out << "gamma2_per_ns = " << fmt(cfg.rates.gamma2) << "\n";
  out << "[calibration]\n";
  out << "p_ref_dbm = " << fmt(cfg.calibration.p_ref_dbm) << "\n";
  out << "phi_rf_ref = " << fmt(cfg.calibration.phi_rf_ref) << "\n";
  out << "[sweep]\n";
  out << "bias_min = " << fmt(cfg.sweep.bias_min) << "\n";
  out << "bias_max = " << fmt(cfg.sweep.bias_max) << "\n";
  out << "n_bias = " << cfg.sweep.n_bias << "\n";
  out << "p_min_dbm = " << fmt(cfg.sweep.p_min) << "\n";
  out << "p_max_dbm = " << fmt(cfg.sweep.p_max) << "\n";
  out << "n_power = " << cfg.sweep.n_power << "\n";
  out << "solver = " << to_string(cfg.sweep.solver) << "\n";
  out << "duration_ns = " << fmt(cfg.sweep.duration) << "\n";
  out << "shots = " << cfg.sweep.shots << "\n";
  out << "seed = " << cfg.seed << "\n";
  // the [output] section is deliberately not part of the effective
  // config: the same run written to two destinations stays byte-identical
  return out.str();
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(render_effective(cfg))));
  return buf;
}

}  // namespace squidsim
