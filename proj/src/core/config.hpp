// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "grid.hpp"
#include "weight.hpp"

namespace ak {

using ordered_json = nlohmann::ordered_json;

struct WeightSpec {
  std::string name = "constant";      // catalogue name, or "table"
  std::vector<double> params;
  std::string table;                  // csv path when name == "table"
};

struct RunConfig {
  WeightSpec weight;
  double grid_half_width = 256.0;
  double grid_step = 1.0 / 16.0;
  double rel_tol = 1e-11;
  double tail_tol = 1e-10;
  double rel_slack = 1e-2;
  double floor_rel = 1e-8;
  int n_max = 256;
  double t_lo = -8.0 * 3.141592653589793;
  double t_hi = 8.0 * 3.141592653589793;
  int t_count = 2048;
  int line_count = 9;
  std::string kernel = "triangle";
  std::map<std::string, std::vector<std::string>> compositions;
  double raster_r_min = 0.0;  // 0 = derive from the annulus
  double raster_r_max = 0.0;
  int raster_radii = 64;
  int raster_angles = 32;
  std::vector<double> weyl_windows;  // empty = derive from the grid
  double weyl_taper = 1.0;
  int pseudo_n = 512;
  double pseudo_eps = 1e-2;
  std::string direction = "forward";
  double norm_window = 128.0;
  std::string out_dir;
  std::vector<WeightSpec> verify_weights;  // matrix for the verify command

  static RunConfig defaults();
};

RunConfig config_from_json(const ordered_json& j);
ordered_json config_to_json(const RunConfig& c);
RunConfig load_config_file(const std::string& path);

// FNV-1a over the canonical serialized form; embedded in every report
std::string config_hash(const RunConfig& c);

Weight weight_from_spec(const WeightSpec& spec);

}  // namespace ak
