// SPDX-License-Identifier: Apache-2.0
#include "weight.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ak {
namespace {

double golden_max(const std::function<double(double)>& g, double lo, double hi) {
  constexpr double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = g(c), fd = g(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a); fc = g(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a); fd = g(d);
    }
  }
  return std::max(fc, fd);
}

// sup_x [log(1+|x+t|^a) - log(1+|x|^a)] for t >= 0. For a <= 1 the sup sits
// at x = 0; for a > 1 it moves to an interior point of the positive axis.
double polynomial_ratio_sup(double alpha, double t) {
  t = std::abs(t);
  if (t == 0.0 || alpha == 0.0) return 0.0;
  double at_zero = std::log1p(std::pow(t, alpha));
  if (alpha <= 1.0) return at_zero;
  auto g = [&](double x) {
    return std::log1p(std::pow(x + t, alpha)) - std::log1p(std::pow(x, alpha));
  };
  // coarse log-spaced scan, then golden refinement around the best bracket
  double best = at_zero, best_x = 0.0;
  double x = 1e-8;
  std::vector<double> xs;
  while (x < 1e6) { xs.push_back(x); x *= 1.04; }
  for (double xx : xs) {
    double v = g(xx);
    if (v > best) { best = v; best_x = xx; }
  }
  double lo = best_x / 1.05, hi = std::max(best_x * 1.05, 1e-8);
  return std::max(at_zero, golden_max(g, lo, hi));
}

Weight make(std::string id, WeightFamily fam, std::vector<double> params,
            std::function<double(double)> lw, std::function<double(double)> cf = {}) {
  Weight w;
  w.id = std::move(id);
  w.family = fam;
  w.params = std::move(params);
  w.log_weight = std::move(lw);
  w.closed_form_log_ratio_sup = std::move(cf);
  return w;
}

}  // namespace

double Weight::log_w(double x) const {
  double v = log_weight(x);
  if (!std::isfinite(v))
    fail(errc::invalid_weight, "invalid weight: log w(" + std::to_string(x) + ") is not finite");
  return v;
}

const std::vector<std::string>& builtin_weight_names() {
  static const std::vector<std::string> names = {
      "constant", "exp_linear", "polynomial", "stretched_exp", "exp_over_log", "exp_poly"};
  return names;
}

Weight make_builtin_weight(const std::string& name, const std::vector<double>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      fail(errc::invalid_arg, "weight '" + name + "' expects " + std::to_string(n) + " parameter(s)");
  };
  if (name == "constant") {
    need(0);
    return make("constant", WeightFamily::constant, {}, [](double) { return 0.0; },
                [](double) { return 0.0; });
  }
  if (name == "exp_linear") {
    need(0);
    return make("exp_linear", WeightFamily::exp_linear, {}, [](double x) { return x; },
                [](double t) { return t; });
  }
  if (name == "polynomial") {
    need(1);
    double alpha = params[0];
    if (!(alpha >= 0.0) || !(alpha <= 64.0))
      fail(errc::invalid_arg, "polynomial weight: alpha must lie in [0, 64]");
    return make("polynomial(alpha=" + std::to_string(alpha) + ")", WeightFamily::polynomial,
                params,
                [alpha](double x) { return std::log1p(std::pow(std::abs(x), alpha)); },
                [alpha](double t) { return polynomial_ratio_sup(alpha, t); });
  }
  if (name == "stretched_exp") {
    need(2);
    double a = params[0], b = params[1];
    if (!(a >= 0.0)) fail(errc::invalid_arg, "stretched_exp weight: a must be >= 0");
    if (!(b > 0.0 && b < 1.0)) fail(errc::invalid_arg, "stretched_exp weight: b must lie in (0,1)");
    return make("stretched_exp(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")",
                WeightFamily::stretched_exp, params,
                [a, b](double x) { return a * std::pow(std::abs(x), b); },
                [a, b](double t) { return a * std::pow(std::abs(t), b); });
  }
  if (name == "exp_over_log") {
    need(0);
    return make("exp_over_log", WeightFamily::exp_over_log, {},
                [](double x) { return std::abs(x) / std::log(2.0 + std::abs(x)); });
  }
  if (name == "exp_poly") {
    need(1);
    double n = params[0];
    if (!(n >= 0.0)) fail(errc::invalid_arg, "exp_poly weight: n must be >= 0");
    return make("exp_poly(n=" + std::to_string(n) + ")", WeightFamily::exp_poly, params,
                [n](double x) { return std::abs(x) + n * std::log1p(x * x); });
  }
  fail(errc::invalid_arg, "unknown weight name '" + name + "'");
}

Weight make_table_weight(std::vector<double> xs, std::vector<double> log_values) {
  if (xs.size() != log_values.size() || xs.size() < 2)
    fail(errc::invalid_arg, "table weight: need at least two (x, log w) rows");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) fail(errc::invalid_arg, "table weight: non-finite abscissa");
    if (!std::isfinite(log_values[i]))
      fail(errc::invalid_weight, "invalid weight: non-finite log w sample in table");
  }
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> x2(xs.size()), v2(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    x2[i] = xs[order[i]];
    v2[i] = log_values[order[i]];
    if (i > 0 && !(x2[i] > x2[i - 1]))
      fail(errc::invalid_arg, "table weight: abscissae must be strictly increasing");
  }
  auto lw = [x = std::move(x2), v = std::move(v2)](double q) {
    std::size_t n = x.size();
    std::size_t hi;
    if (q <= x.front()) hi = 1;
    else if (q >= x.back()) hi = n - 1;
    else hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), q) - x.begin());
    double t = (q - x[hi - 1]) / (x[hi] - x[hi - 1]);
    return v[hi - 1] + t * (v[hi] - v[hi - 1]);
  };
  return make("table", WeightFamily::table, {}, std::move(lw));
}

Weight load_weight_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open weight table '" + path + "'");
  bool omega_column = false;
  std::vector<double> xs, vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("columns=x,omega") != std::string::npos) omega_column = true;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v)) fail(errc::bad_config, "weight table '" + path + "': malformed row");
    if (omega_column) {
      if (!(v > 0.0)) fail(errc::invalid_weight, "invalid weight: nonpositive omega sample in table");
      v = std::log(v);
    }
    xs.push_back(x);
    vals.push_back(v);
  }
  return make_table_weight(std::move(xs), std::move(vals));
}

double log_ratio_sup(const Weight& w, double t, Interval domain, double step) {
  if (!(step > 0.0)) fail(errc::invalid_arg, "log_ratio_sup: step must be positive");
  if (!(domain.hi > domain.lo)) fail(errc::invalid_arg, "log_ratio_sup: empty domain");
  auto count = static_cast<std::size_t>(std::floor((domain.hi - domain.lo) / step)) + 1;
  double sup = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count; ++j) {
    double x = domain.lo + static_cast<double>(j) * step;
    double v = w.log_w(x + t) - w.log_w(x);
    if (v > sup) sup = v;
  }
  return sup;
}

WeightConditionReport check_weight_condition(const Weight& w, const std::vector<double>& offsets,
                                             Interval domain, double step) {
  WeightConditionReport report;
  Interval doubled{2.0 * domain.lo, 2.0 * domain.hi};
  for (double y : offsets) {
    OffsetStability s;
    s.offset = y;
    s.sup_base = log_ratio_sup(w, y, domain, step);
    s.sup_doubled = log_ratio_sup(w, y, doubled, step);
    double scale = std::max({1.0, std::abs(s.sup_base), std::abs(s.sup_doubled)});
    s.rel_change = std::abs(s.sup_doubled - s.sup_base) / scale;
    s.stable = s.rel_change < 1e-3;
    report.all_stable = report.all_stable && s.stable;
    report.offsets.push_back(s);
  }
  return report;
}

// Bounding-line fit: minimise the total slack sum_t (log_c + m|t| - f(t))
// subject to the line dominating every probed point. A plain least-squares
// slope against |t| degenerates for odd data (signed exponential weights),
// so the fit enumerates candidate support lines of the upper envelope.
H4Fit fit_h4(const Weight& w, const std::vector<double>& t_grid, Interval domain, double step) {
  if (t_grid.size() < 2) fail(errc::invalid_arg, "fit_h4: need at least two probe offsets");
  const std::size_t n = t_grid.size();
  std::vector<double> u(n), f(n);
  double t_lo = t_grid[0], t_hi = t_grid[0];
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::abs(t_grid[i]);
    f[i] = w.has_closed_form() ? w.closed_form_log_ratio_sup(t_grid[i])
                               : log_ratio_sup(w, t_grid[i], domain, step);
    t_lo = std::min(t_lo, t_grid[i]);
    t_hi = std::max(t_hi, t_grid[i]);
  }
  double fmax = *std::max_element(f.begin(), f.end());
  double scale = std::max(1.0, std::abs(fmax));

  double best_obj = std::numeric_limits<double>::infinity();
  double best_m = 0.0, best_c = fmax;
  auto consider = [&](double m, double c) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = c + m * u[i] - f[i];
      if (r < -1e-12 * scale) return;
      obj += r;
    }
    if (obj < best_obj - 1e-12 * scale) {
      best_obj = obj;
      best_m = m;
      best_c = c;
    }
  };
  consider(0.0, fmax);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (u[j] - u[i] < 1e-12) continue;
      double m = (f[j] - f[i]) / (u[j] - u[i]);
      consider(m, f[i] - m * u[i]);
    }

  H4Fit fit;
  fit.growth_rate = best_m;
  fit.log_c = best_c;
  fit.t_range = {t_lo, t_hi};
  double viol = 0.0;
  for (std::size_t i = 0; i < n; ++i) viol = std::max(viol, f[i] - (best_c + best_m * u[i]));
  fit.max_violation = viol;
  return fit;
}

}  // namespace ak
