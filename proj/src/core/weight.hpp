// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "grid.hpp"

namespace ak {

enum class WeightFamily {
  constant,
  exp_linear,
  polynomial,
  stretched_exp,
  exp_over_log,
  exp_poly,
  table,
  custom,
};

// A positive weight on the line, stored through its logarithm. Instances are
// immutable value objects; evaluation is pure.
struct Weight {
  std::string id;
  WeightFamily family = WeightFamily::custom;
  std::vector<double> params;
  std::function<double(double)> log_weight;
  // t -> sup_x [log w(x+t) - log w(x)]; attached only where the family admits
  // an exact evaluation.
  std::function<double(double)> closed_form_log_ratio_sup;

  bool has_closed_form() const { return static_cast<bool>(closed_form_log_ratio_sup); }
  double log_w(double x) const;  // throws invalid_weight on non-finite values
};

Weight make_builtin_weight(const std::string& name, const std::vector<double>& params = {});
const std::vector<std::string>& builtin_weight_names();

// Table weights interpolate the log linearly and extrapolate with the
// outermost segment slopes, so exponential tables stay exponential.
Weight make_table_weight(std::vector<double> xs, std::vector<double> log_values);
Weight load_weight_table_csv(const std::string& path);

inline constexpr Interval kDefaultSupDomain{-200.0, 200.0};
inline constexpr double kDefaultSupStep = 1e-2;

// max over the sampled x-grid of log w(x+t) - log w(x)
double log_ratio_sup(const Weight& w, double t, Interval domain = kDefaultSupDomain,
                     double step = kDefaultSupStep);

struct OffsetStability {
  double offset = 0.0;
  double sup_base = 0.0;     // sampled sup on the requested domain
  double sup_doubled = 0.0;  // sampled sup on the doubled domain
  double rel_change = 0.0;
  bool stable = false;
};

struct WeightConditionReport {
  std::vector<OffsetStability> offsets;
  bool all_stable = true;
};

WeightConditionReport check_weight_condition(const Weight& w, const std::vector<double>& offsets,
                                             Interval domain = kDefaultSupDomain,
                                             double step = kDefaultSupStep);

// Bounding line log||S_t|| <= log_c + growth_rate * |t| over the probed grid.
struct H4Fit {
  double log_c = 0.0;
  double growth_rate = 0.0;
  double max_violation = 0.0;
  Interval t_range{0.0, 0.0};
};

H4Fit fit_h4(const Weight& w, const std::vector<double>& t_grid,
             Interval domain = kDefaultSupDomain, double step = kDefaultSupStep);

}  // namespace ak
