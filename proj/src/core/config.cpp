// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <fstream>

namespace ak {
namespace {

template <typename T>
T get_or(const ordered_json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(errc::bad_config, std::string("config field '") + key + "': " + e.what());
  }
}

ordered_json weight_spec_to_json(const WeightSpec& w) {
  return ordered_json{{"name", w.name}, {"params", w.params}, {"table", w.table}};
}

WeightSpec weight_spec_from_json(const ordered_json& j) {
  WeightSpec w;
  if (j.is_string()) {
    w.name = j.get<std::string>();
    return w;
  }
  w.name = get_or<std::string>(j, "name", "constant");
  w.params = get_or<std::vector<double>>(j, "params", {});
  w.table = get_or<std::string>(j, "table", "");
  return w;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.verify_weights = {
      {"constant", {}, ""},          {"exp_linear", {}, ""},
      {"polynomial", {2.0}, ""},     {"stretched_exp", {1.0, 0.5}, ""},
      {"exp_over_log", {}, ""},      {"exp_poly", {1.0}, ""},
  };
  return c;
}

RunConfig config_from_json(const ordered_json& j) {
  if (!j.is_object()) fail(errc::bad_config, "config: expected a JSON object");
  RunConfig d = RunConfig::defaults();
  RunConfig c = d;
  if (j.contains("weight")) c.weight = weight_spec_from_json(j.at("weight"));
  if (j.contains("grid")) {
    c.grid_half_width = get_or(j.at("grid"), "L", d.grid_half_width);
    c.grid_step = get_or(j.at("grid"), "h", d.grid_step);
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    c.rel_tol = get_or(t, "rel_tol", d.rel_tol);
    c.tail_tol = get_or(t, "tail_tol", d.tail_tol);
    c.rel_slack = get_or(t, "rel_slack", d.rel_slack);
    c.floor_rel = get_or(t, "floor", d.floor_rel);
    for (double v : {c.rel_tol, c.tail_tol, c.rel_slack, c.floor_rel})
      if (!(v > 0.0)) fail(errc::bad_config, "config: tolerances must be positive");
  }
  c.n_max = get_or(j, "n_max", d.n_max);
  if (j.contains("t_grid")) {
    const auto& t = j.at("t_grid");
    c.t_lo = get_or(t, "lo", d.t_lo);
    c.t_hi = get_or(t, "hi", d.t_hi);
    c.t_count = get_or(t, "count", d.t_count);
  }
  c.line_count = get_or(j, "line_count", d.line_count);
  c.kernel = get_or(j, "kernel", d.kernel);
  if (j.contains("compositions")) {
    for (const auto& [key, value] : j.at("compositions").items())
      c.compositions[key] = value.get<std::vector<std::string>>();
  }
  if (j.contains("raster")) {
    const auto& r = j.at("raster");
    c.raster_r_min = get_or(r, "r_min", d.raster_r_min);
    c.raster_r_max = get_or(r, "r_max", d.raster_r_max);
    c.raster_radii = get_or(r, "n_radii", d.raster_radii);
    c.raster_angles = get_or(r, "n_angles", d.raster_angles);
  }
  if (j.contains("weyl")) {
    c.weyl_windows = get_or(j.at("weyl"), "windows", d.weyl_windows);
    c.weyl_taper = get_or(j.at("weyl"), "taper", d.weyl_taper);
  }
  if (j.contains("pseudo")) {
    c.pseudo_n = get_or(j.at("pseudo"), "n", d.pseudo_n);
    c.pseudo_eps = get_or(j.at("pseudo"), "eps", d.pseudo_eps);
  }
  c.direction = get_or(j, "direction", d.direction);
  c.norm_window = get_or(j, "window", d.norm_window);
  c.out_dir = get_or(j, "out", d.out_dir);
  if (j.contains("weights")) {
    c.verify_weights.clear();
    for (const auto& w : j.at("weights")) c.verify_weights.push_back(weight_spec_from_json(w));
  }
  Grid{c.grid_half_width, c.grid_step};  // validate grid invariants early
  return c;
}

ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["weight"] = weight_spec_to_json(c.weight);
  j["grid"] = {{"L", c.grid_half_width}, {"h", c.grid_step}};
  j["tolerances"] = {{"rel_tol", c.rel_tol},
                     {"tail_tol", c.tail_tol},
                     {"rel_slack", c.rel_slack},
                     {"floor", c.floor_rel}};
  j["n_max"] = c.n_max;
  j["t_grid"] = {{"lo", c.t_lo}, {"hi", c.t_hi}, {"count", c.t_count}};
  j["line_count"] = c.line_count;
  j["kernel"] = c.kernel;
  ordered_json comps = ordered_json::object();
  for (const auto& [key, value] : c.compositions) comps[key] = value;
  j["compositions"] = comps;
  j["raster"] = {{"r_min", c.raster_r_min},
                 {"r_max", c.raster_r_max},
                 {"n_radii", c.raster_radii},
                 {"n_angles", c.raster_angles}};
  j["weyl"] = {{"windows", c.weyl_windows}, {"taper", c.weyl_taper}};
  j["pseudo"] = {{"n", c.pseudo_n}, {"eps", c.pseudo_eps}};
  j["direction"] = c.direction;
  j["window"] = c.norm_window;
  j["out"] = c.out_dir;
  ordered_json weights = ordered_json::array();
  for (const auto& w : c.verify_weights) weights.push_back(weight_spec_to_json(w));
  j["weights"] = weights;
  return j;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::bad_config, "cannot open config file '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::bad_config, std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
  const std::string s = config_to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Weight weight_from_spec(const WeightSpec& spec) {
  if (spec.name == "table") {
    if (spec.table.empty()) fail(errc::bad_config, "weight spec: table path missing");
    return load_weight_table_csv(spec.table);
  }
  return make_builtin_weight(spec.name, spec.params);
}

}  // namespace ak
