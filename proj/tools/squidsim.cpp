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

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "squidsim/cli.hpp"
#include "squidsim/errors.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string solver;
  bool json_errors = false;
};

squidsim::RunConfig effective_config(const Options& opt) {
  squidsim::RunConfig cfg;
  if (!opt.config_path.empty()) cfg = squidsim::load_config(opt.config_path);
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.solver.empty()) {
    if (opt.solver == "full")
      cfg.sweep.solver = squidsim::SweepSolver::FullDynamics;
    else if (opt.solver == "rate")
      cfg.sweep.solver = squidsim::SweepSolver::RateEquation;
    else
      throw squidsim::ValidationError("--solver must be 'full' or 'rate'");
  }
  return cfg;
}

int report_error(const Options& opt, const char* type, const std::string& msg,
                 int code) {
  if (opt.json_errors) {
    nlohmann::ordered_json j;
    j["error"]["type"] = type;
    j["error"]["message"] = msg;
    std::cout << j.dump() << "\n";
  } else {
    std::cerr << "error (" << type << "): " << msg << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rf-SQUID flux qubit simulator: double-well spectra, driven "
               "four-level dynamics and bias/power population maps"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "config file (INI sections)");
  app.add_option("--out", opt.out_dir, "output directory override");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed override");
  app.add_option("--solver", opt.solver, "sweep solver override: full|rate");
  app.add_flag("--json-errors", opt.json_errors,
               "report errors as machine-readable JSON");

  auto* levels = app.add_subcommand("levels", "level diagram + model");
  auto* scan = app.add_subcommand("scan", "bias step curve");
  auto* sweep = app.add_subcommand("sweep", "2D bias x power map");
  auto* verify = app.add_subcommand("verify", "built-in verification checks");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) opt.seed = seed_value;

  try {
    squidsim::RunConfig cfg = effective_config(opt);
    if (levels->parsed()) return squidsim::cmd_levels(cfg);
    if (scan->parsed()) return squidsim::cmd_scan(cfg);
    if (sweep->parsed()) return squidsim::cmd_sweep(cfg);
    if (verify->parsed()) return squidsim::cmd_verify(cfg);
  } catch (const squidsim::ParseError& e) {
    return report_error(opt, e.type_name(), e.what(), 2);
  } catch (const squidsim::ValidationError& e) {
    return report_error(opt, e.type_name(), e.what(), 2);
  } catch (const squidsim::Error& e) {
    return report_error(opt, e.type_name(), e.what(), 1);
  } catch (const std::exception& e) {
    return report_error(opt, "InternalError", e.what(), 1);
  }
  return 0;
}
