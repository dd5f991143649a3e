// SPDX-License-Identifier: Apache-2.0
//
// annulus-kit: weight admissibility reports, shift spectra, multiplier norms
// and symbol strips on sampled weighted spaces. Thin shell over the shared
// library's C surface; all numerics live behind ak_run_command.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "annuluskit/annulus_kit.h"

namespace {

using json = nlohmann::ordered_json;

struct CommonFlags {
  std::string config_path;
  std::string weight;
  std::vector<double> params;
  std::string weight_table;
  double L = 0.0;
  double h = 0.0;
  int n_max = 0;
  double tol = 0.0;
  std::string out;
  std::string kernel;
  int line_count = 0;
  double window = 0.0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
  cmd->add_option("--weight", f.weight, "builtin weight name");
  cmd->add_option("--params", f.params, "weight parameters")->delimiter(',');
  cmd->add_option("--weight-table", f.weight_table, "CSV table of (x, log w(x)) samples");
  cmd->add_option("--L", f.L, "grid half-width");
  cmd->add_option("--h", f.h, "grid step (1/h integral)");
  cmd->add_option("--n-max", f.n_max, "norm-sequence length for radius estimates");
  cmd->add_option("--tol", f.tol, "relative tolerance for iterative estimates");
  cmd->add_option("--out", f.out, "output directory for report.json and rasters");
  cmd->add_option("--kernel", f.kernel, "kernel id, composition id, or CSV path");
  cmd->add_option("--line-count", f.line_count, "number of symbol-strip lines");
  cmd->add_option("--window", f.window, "norm-estimate window half-width");
}

int build_config(const CommonFlags& f, std::string& config_out) {
  json cfg = json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot open config file '%s'\n", f.config_path.c_str());
      return 2;
    }
    try {
      in >> cfg;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: config parse failure: %s\n", e.what());
      return 2;
    }
    if (!cfg.is_object()) {
      std::fprintf(stderr, "error: config root must be a JSON object\n");
      return 2;
    }
  }
  if (!f.weight_table.empty()) {
    cfg["weight"] = {{"name", "table"}, {"table", f.weight_table}};
  } else if (!f.weight.empty()) {
    cfg["weight"] = {{"name", f.weight}, {"params", f.params}};
  }
  if (f.L > 0.0) cfg["grid"]["L"] = f.L;
  if (f.h > 0.0) cfg["grid"]["h"] = f.h;
  if (f.n_max > 0) cfg["n_max"] = f.n_max;
  if (f.tol > 0.0) cfg["tolerances"]["rel_tol"] = f.tol;
  if (!f.out.empty()) cfg["out"] = f.out;
  if (!f.kernel.empty()) cfg["kernel"] = f.kernel;
  if (f.line_count > 0) cfg["line_count"] = f.line_count;
  if (f.window > 0.0) cfg["window"] = f.window;
  config_out = cfg.dump();
  return 0;
}

int run(const std::string& command, const std::string& subcommand, const CommonFlags& flags) {
  std::string config;
  if (int rc = build_config(flags, config); rc != 0) return rc;
  char* report = nullptr;
  int exit_code = 0;
  ak_status st =
      ak_run_command(command.c_str(), subcommand.c_str(), config.c_str(), &report, &exit_code);
  if (st != AK_OK) {
    std::fprintf(stderr, "error: %s\n", ak_last_error());
    return (st == AK_ERR_BAD_CONFIG || st == AK_ERR_INVALID_ARG) ? 2 : 1;
  }
  std::fputs(report, stdout);
  ak_string_free(report);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical spectra and multiplier symbols on weighted L2 spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ak_version());

  CommonFlags flags;
  std::string spectrum_sub, multiplier_sub;

  CLI::App* weight = app.add_subcommand("weight", "admissibility check and growth-bound fit");
  add_common_flags(weight, flags);

  CLI::App* spectrum =
      app.add_subcommand("spectrum", "shift-operator spectra: radius|strip|annulus|map|pseudo");
  spectrum->add_option("sub", spectrum_sub, "radius|strip|annulus|map|pseudo")->required();
  add_common_flags(spectrum, flags);

  CLI::App* multiplier =
      app.add_subcommand("multiplier", "multiplier analysis: norm|commute|symbol|thm4");
  multiplier->add_option("sub", multiplier_sub, "norm|commute|symbol|thm4")->required();
  add_common_flags(multiplier, flags);

  CLI::App* verify = app.add_subcommand("verify", "cross-module invariant suite");
  add_common_flags(verify, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (weight->parsed()) return run("weight", "", flags);
  if (spectrum->parsed()) return run("spectrum", spectrum_sub, flags);
  if (multiplier->parsed()) return run("multiplier", multiplier_sub, flags);
  if (verify->parsed()) return run("verify", "", flags);
  return 2;
}
