// SPDX-License-Identifier: Apache-2.0
#include "sampled_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ak {
namespace {

constexpr double kExpArgLimit = 700.0;  // past this, exp overflows double range

double trapezoid_factor(std::size_t j, std::size_t n) {
  return (j == 0 || j + 1 == n) ? 0.5 : 1.0;
}

}  // namespace

std::size_t SampledFunction::support_begin() const {
  if (!support) return 0;
  double lo = std::max(support->lo, -grid.half_width);
  return grid.index_near(lo - 0.5 * grid.step + 1e-12);
}

std::size_t SampledFunction::support_end() const {
  if (!support) return values.size();
  double hi = std::min(support->hi, grid.half_width);
  return std::min(values.size(), grid.index_near(hi + 0.5 * grid.step - 1e-12) + 1);
}

void SampledFunction::shrink_support_to_nonzero() {
  std::size_t lo = values.size(), hi = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] != cplx{0.0, 0.0}) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
  }
  if (lo > hi) {
    support = Interval{0.0, 0.0};
    return;
  }
  support = Interval{grid.point(lo), grid.point(hi)};
}

double weighted_norm(const SampledFunction& f, const Weight& w) {
  const std::size_t n = f.values.size();
  double acc = 0.0;
  for (std::size_t j = f.support_begin(); j < f.support_end(); ++j) {
    const cplx v = f.values[j];
    if (v == cplx{0.0, 0.0}) continue;
    // pair the sample with its weight before squaring so that balanced
    // products like e^{+600} * e^{-600} never leave the double range
    double a = std::abs(v) * std::exp(w.log_w(f.grid.point(j)));
    acc += trapezoid_factor(j, n) * a * a;
  }
  return std::sqrt(f.grid.step * acc);
}

SampledFunction translate(const SampledFunction& f, double t, TranslateStats* stats) {
  const auto off = f.grid.offset_of(t);
  const auto n = static_cast<std::int64_t>(f.values.size());
  SampledFunction out(f.grid);
  double dropped = 0.0, total = 0.0;
  for (std::int64_t j = 0; j < n; ++j) {
    const cplx v = f.values[j];
    if (v == cplx{0.0, 0.0}) continue;
    double m = std::norm(v);
    total += m;
    std::int64_t k = j + off;
    if (k < 0 || k >= n) {
      dropped += m;
      continue;
    }
    out.values[k] = v;
  }
  if (f.support) {
    out.support = Interval{std::max(f.support->lo + t, -f.grid.half_width),
                           std::min(f.support->hi + t, f.grid.half_width)};
    if (out.support->hi < out.support->lo) out.support = Interval{0.0, 0.0};
  }
  if (stats) {
    stats->dropped_mass_rel = total > 0.0 ? std::sqrt(dropped / total) : 0.0;
    stats->truncated = stats->dropped_mass_rel > 1e-12;
  }
  return out;
}

SampledFunction translate_checked(const SampledFunction& f, double t) {
  TranslateStats stats;
  SampledFunction out = translate(f, t, &stats);
  if (stats.dropped_mass_rel > 0.0)
    fail(errc::truncation, "translate: shift by " + std::to_string(t) +
                               " drops nonzero samples off the grid");
  return out;
}

SampledFunction modulate(const SampledFunction& f, double alpha) {
  SampledFunction out = f;
  for (std::size_t j = out.support_begin(); j < out.support_end(); ++j) {
    if (out.values[j] == cplx{0.0, 0.0}) continue;
    double ph = alpha * f.grid.point(j);
    out.values[j] *= cplx{std::cos(ph), std::sin(ph)};
  }
  return out;
}

SampledFunction scale_exp(const SampledFunction& f, double a) {
  double reach = f.grid.half_width;
  if (f.support) reach = std::max(std::abs(f.support->lo), std::abs(f.support->hi));
  if (std::abs(a) * reach > kExpArgLimit)
    fail(errc::scaling_overflow,
         "scaling overflow: |a| * support reach exceeds the representable exponent range; "
         "shrink the grid half-width or the exponent");
  SampledFunction out = f;
  for (std::size_t j = out.support_begin(); j < out.support_end(); ++j) {
    if (out.values[j] == cplx{0.0, 0.0}) continue;
    out.values[j] *= std::exp(a * f.grid.point(j));
  }
  return out;
}

SampledFunction make_bump(const Grid& g, double center, double width) {
  if (!(width > 0.0)) fail(errc::invalid_arg, "bump: width must be positive");
  double lo = center - 0.5 * width, hi = center + 0.5 * width;
  if (lo < -g.half_width || hi > g.half_width)
    fail(errc::invalid_arg, "bump: support exceeds the grid");
  SampledFunction f(g);
  f.support = Interval{lo, hi};
  for (std::size_t j = f.support_begin(); j < f.support_end(); ++j) {
    double x = g.point(j);
    if (x < lo || x > hi) continue;
    f.values[j] = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * (x - center) / width));
  }
  return f;
}

SampledFunction make_gaussian_truncated(const Grid& g, double sigma, double center) {
  if (!(sigma > 0.0)) fail(errc::invalid_arg, "gaussian: sigma must be positive");
  double lo = center - 6.0 * sigma, hi = center + 6.0 * sigma;
  if (lo < -g.half_width || hi > g.half_width)
    fail(errc::invalid_arg, "gaussian: 6-sigma support exceeds the grid");
  SampledFunction f(g);
  f.support = Interval{lo, hi};
  for (std::size_t j = f.support_begin(); j < f.support_end(); ++j) {
    double x = g.point(j);
    if (x < lo || x > hi) continue;
    double u = (x - center) / sigma;
    f.values[j] = std::exp(-0.5 * u * u);
  }
  return f;
}

SampledFunction make_plane_wave_window(const Grid& g, double a, double b,
                                       double window_half_width, double taper) {
  return [&] {
    double W = window_half_width;
    if (!(W > 0.0) || taper < 0.0 || 2.0 * taper > 2.0 * W)
      fail(errc::invalid_arg, "plane_wave_window: need 0 <= taper <= window half-width");
    if (W > g.half_width) fail(errc::invalid_arg, "plane_wave_window: window exceeds the grid");
    if (std::abs(a) * W > kExpArgLimit)
      fail(errc::scaling_overflow,
           "scaling overflow: plane wave rate times window exceeds the exponent range");
    SampledFunction f(g);
    f.support = Interval{-W, W};
    for (std::size_t j = f.support_begin(); j < f.support_end(); ++j) {
      double x = g.point(j);
      if (x < -W || x > W) continue;
      double T;
      if (taper == 0.0) {
        T = (x == -W || x == W) ? 0.5 : 1.0;
      } else {
        double edge = W - std::abs(x);
        T = edge >= taper ? 1.0
                          : 0.5 * (1.0 - std::cos(std::numbers::pi * edge / taper));
      }
      if (T == 0.0) continue;
      double ph = b * x;
      f.values[j] = T * std::exp(a * x) * cplx{std::cos(ph), std::sin(ph)};
    }
    return f;
  }();
}

SampledFunction make_delta(const Grid& g, double center) {
  if (!g.on_grid(center + g.half_width))
    fail(errc::invalid_arg, "delta: center must be a grid point");
  SampledFunction f(g);
  std::size_t j = g.index_near(center);
  f.values[j] = 1.0 / g.step;
  f.support = Interval{center, center};
  return f;
}

SampledFunction make_indicator(const Grid& g, double lo, double hi) {
  if (!(hi > lo)) fail(errc::invalid_arg, "indicator: empty interval");
  if (lo < -g.half_width || hi > g.half_width)
    fail(errc::invalid_arg, "indicator: support exceeds the grid");
  SampledFunction f(g);
  f.support = Interval{lo, hi};
  for (std::size_t j = f.support_begin(); j < f.support_end(); ++j) {
    double x = g.point(j);
    if (x < lo || x > hi) continue;
    f.values[j] = (x == lo || x == hi) ? 0.5 : 1.0;
  }
  return f;
}

SampledFunction make_test_function(const Grid& g, const std::string& kind,
                                   const std::vector<double>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      fail(errc::invalid_arg, "test function '" + kind + "' expects " + std::to_string(n) +
                                  " parameter(s)");
  };
  if (kind == "bump") {
    need(2);
    return make_bump(g, params[0], params[1]);
  }
  if (kind == "gaussian_truncated") {
    need(1);
    return make_gaussian_truncated(g, params[0]);
  }
  if (kind == "plane_wave_window") {
    need(4);
    return make_plane_wave_window(g, params[0], params[1], params[2], params[3]);
  }
  if (kind == "delta") {
    need(1);
    return make_delta(g, params[0]);
  }
  if (kind == "indicator") {
    need(2);
    return make_indicator(g, params[0], params[1]);
  }
  fail(errc::invalid_arg, "unknown test function kind '" + kind + "'");
}

void save_function_csv(const SampledFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot write '" + path + "'");
  out.precision(17);
  out << "# L=" << f.grid.half_width << " h=" << f.grid.step << "\n";
  for (std::size_t j = f.support_begin(); j < f.support_end(); ++j)
    out << f.grid.point(j) << "," << f.values[j].real() << "," << f.values[j].imag() << "\n";
}

SampledFunction load_function_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("# L=", 0) != 0)
    fail(errc::bad_config, "function csv '" + path + "': missing '# L=<L> h=<h>' header");
  double L = 0.0, h = 0.0;
  if (std::sscanf(line.c_str(), "# L=%lf h=%lf", &L, &h) != 2)
    fail(errc::bad_config, "function csv '" + path + "': malformed header");
  SampledFunction f(Grid{L, h});
  double lo = L, hi = -L;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, re, im;
    if (!(row >> x >> re >> im))
      fail(errc::bad_config, "function csv '" + path + "': malformed row");
    if (!f.grid.on_grid(x + L))
      fail(errc::bad_config, "function csv '" + path + "': abscissa off the declared grid");
    f.values[f.grid.index_near(x)] = cplx{re, im};
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (lo <= hi) f.support = Interval{lo, hi};
  return f;
}

}  // namespace ak
