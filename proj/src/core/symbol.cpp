// SPDX-License-Identifier: Apache-2.0
#include "symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ak {
namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double SymbolLine::sup_abs_on_mask() const {
  double sup = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (mask[k]) sup = std::max(sup, std::abs(values[k]));
  return sup;
}

std::vector<double> chebyshev_lines(double a_min, double a_max, int count) {
  if (count < 1) fail(errc::invalid_arg, "symbol strip: line count must be >= 1");
  if (a_max - a_min < 1e-15 || count == 1) return {0.5 * (a_min + a_max)};
  std::vector<double> lines(count);
  const double mid = 0.5 * (a_min + a_max), half = 0.5 * (a_max - a_min);
  for (int l = 0; l < count; ++l) {
    double theta = std::numbers::pi * static_cast<double>(l) / static_cast<double>(count - 1);
    lines[count - 1 - l] = mid + half * std::cos(theta);
  }
  lines.front() = a_min;
  lines.back() = a_max;
  return lines;
}

std::vector<SampledFunction> symbol_probes(const Grid& g) {
  // the delta probe has a flat transform and anchors full mask coverage;
  // the bumps and the gaussian have zeros in incommensurate places
  return {
      make_delta(g, 0.0),
      make_bump(g, 0.0, 3.0),
      make_bump(g, 0.5, 1.75),
      make_gaussian_truncated(g, 0.75),
  };
}

SymbolLine extract_symbol(const Multiplier& m, double a,
                          const std::vector<SampledFunction>& probes, const FreqGrid& t,
                          double floor_rel) {
  if (probes.empty()) fail(errc::invalid_arg, "extract_symbol: empty probe set");
  const std::size_t T = t.count;
  std::vector<std::vector<cplx>> num(probes.size()), den(probes.size());
  std::vector<double> floors(probes.size());
  for (std::size_t p = 0; p < probes.size(); ++p) {
    den[p] = weighted_ft(probes[p], a, t);
    num[p] = weighted_ft(m.apply(probes[p]), a, t);
    // admissibility is relative to the probe's transform scale; include the
    // zero-frequency value so a grid placed entirely in a transform dead
    // zone is masked out instead of floored against itself
    double peak = std::abs(weighted_ft_point(probes[p], a, 0.0));
    for (const cplx& v : den[p]) peak = std::max(peak, std::abs(v));
    floors[p] = floor_rel * peak;
  }

  SymbolLine line;
  line.a = a;
  line.t = t;
  line.values.assign(T, cplx{0.0, 0.0});
  line.mask.assign(T, 0);
  std::size_t covered = 0;
  bool any = false;
  std::vector<double> re, im;
  for (std::size_t k = 0; k < T; ++k) {
    re.clear();
    im.clear();
    for (std::size_t p = 0; p < probes.size(); ++p) {
      if (std::abs(den[p][k]) <= floors[p]) continue;
      cplx ratio = num[p][k] / den[p][k];
      re.push_back(ratio.real());
      im.push_back(ratio.imag());
    }
    if (re.empty()) continue;
    any = true;
    cplx value{median(re), median(im)};
    double spread = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i)
      spread = std::max(spread, std::abs(cplx{re[i], im[i]} - value));
    line.values[k] = value;
    if (spread < 1e-6 * (1.0 + std::abs(value))) {
      line.mask[k] = 1;
      ++covered;
      line.max_spread = std::max(line.max_spread, spread);
    }
  }
  if (!any)
    fail(errc::probe_coverage, "probes do not cover the frequency range");
  line.mask_coverage = static_cast<double>(covered) / static_cast<double>(T);
  return line;
}

SymbolStrip extract_symbol_strip(const Multiplier& m, double a_min, double a_max, int line_count,
                                 const std::vector<SampledFunction>& probes, const FreqGrid& t,
                                 double floor_rel) {
  SymbolStrip strip;
  for (double a : chebyshev_lines(a_min, a_max, line_count))
    strip.lines.push_back(extract_symbol(m, a, probes, t, floor_rel));
  return strip;
}

SymbolBoundReport verify_symbol_bound(const Kernel& k, const Weight& w,
                                      const std::vector<cplx>& strip_samples, double rel_slack,
                                      const Grid& grid, double window_half_width) {
  if (strip_samples.empty()) fail(errc::invalid_arg, "symbol bound: no strip samples");
  if (!(rel_slack >= 0.0)) fail(errc::invalid_arg, "symbol bound: rel_slack must be >= 0");
  SymbolBoundReport rep;
  rep.rel_slack = rel_slack;
  for (const cplx& z : strip_samples) {
    double v = std::abs(kernel_symbol(k.phi, z));
    if (v > rep.strip_max) {
      rep.strip_max = v;
      rep.arg_max = z;
    }
  }
  Multiplier m = Multiplier::convolution(k);
  NormEstimate base = operator_norm(m, w, grid, 1e-11, window_half_width);
  NormEstimate doubled = operator_norm(m, w, grid, 1e-11, 2.0 * window_half_width);
  rep.op_norm = base.value;
  rep.op_norm_doubled = doubled.value;
  rep.window = base.window_half_width;
  rep.margin = base.value - rep.strip_max;
  rep.margin_doubled = doubled.value - rep.strip_max;
  rep.margin_non_worsening = rep.margin_doubled >= rep.margin - 1e-9;
  rep.pass = rep.strip_max <= base.value * (1.0 + rel_slack) && rep.margin_non_worsening;
  return rep;
}

double holomorphy_residual(const SymbolStrip& s, double t_lo, double t_hi, double a_lo,
                           double a_hi) {
  if (s.lines.size() < 2)
    fail(errc::invalid_arg, "holomorphy: need at least two symbol lines (nonempty interior)");
  const double strip_lo = s.lines.front().a, strip_hi = s.lines.back().a;
  if (a_lo <= strip_lo + 1e-12 || a_hi >= strip_hi - 1e-12)
    fail(errc::invalid_arg, "holomorphy: rectangle touches the strip boundary");
  if (!(t_hi > t_lo) || !(a_hi > a_lo))
    fail(errc::invalid_arg, "holomorphy: degenerate rectangle");

  // snap the rectangle to stored lines and frequency samples
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < s.lines.size(); ++i)
    if (s.lines[i].a >= a_lo - 1e-12 && s.lines[i].a <= a_hi + 1e-12) rows.push_back(i);
  if (rows.size() < 2) fail(errc::invalid_arg, "holomorphy: rectangle spans fewer than two lines");
  const FreqGrid& t = s.lines.front().t;
  auto clamp_idx = [&](double x) {
    double k = (x - t.t0) / t.dt;
    auto idx = static_cast<std::int64_t>(std::llround(k));
    idx = std::max<std::int64_t>(0, std::min<std::int64_t>(idx, static_cast<std::int64_t>(t.count) - 1));
    return static_cast<std::size_t>(idx);
  };
  std::size_t k_lo = clamp_idx(t_lo), k_hi = clamp_idx(t_hi);
  if (k_hi <= k_lo + 1) fail(errc::invalid_arg, "holomorphy: rectangle too narrow in t");

  auto value_at = [&](std::size_t row, std::size_t k) {
    const SymbolLine& line = s.lines[row];
    if (!line.mask[k])
      fail(errc::invalid_arg, "holomorphy: rectangle overlaps a masked-out symbol region");
    return line.values[k];
  };

  cplx contour{0.0, 0.0};
  double max_abs = 0.0;
  // horizontal edges: dz = dt, bottom traversed left-to-right, top reversed
  for (std::size_t pass = 0; pass < 2; ++pass) {
    std::size_t row = pass == 0 ? rows.front() : rows.back();
    cplx acc{0.0, 0.0};
    for (std::size_t k = k_lo; k < k_hi; ++k) {
      cplx va = value_at(row, k), vb = value_at(row, k + 1);
      acc += 0.5 * (va + vb) * t.dt;
      max_abs = std::max({max_abs, std::abs(va), std::abs(vb)});
    }
    contour += pass == 0 ? acc : -acc;
  }
  // vertical edges: dz = i da over the stored line heights
  for (std::size_t pass = 0; pass < 2; ++pass) {
    std::size_t k = pass == 0 ? k_hi : k_lo;
    cplx acc{0.0, 0.0};
    for (std::size_t r = 0; r + 1 < rows.size(); ++r) {
      cplx va = value_at(rows[r], k), vb = value_at(rows[r + 1], k);
      double da = s.lines[rows[r + 1]].a - s.lines[rows[r]].a;
      acc += cplx{0.0, 1.0} * 0.5 * (va + vb) * da;
    }
    contour += pass == 0 ? acc : -acc;
  }

  double t_len = static_cast<double>(k_hi - k_lo) * t.dt;
  double a_len = s.lines[rows.back()].a - s.lines[rows.front()].a;
  double perimeter = 2.0 * (t_len + a_len);
  return std::abs(contour) / (perimeter * std::max(max_abs, 1e-300));
}

cplx resolvent_symbol(cplx alpha, cplx z) {
  // z = t + i a; the line symbol of the shift at height a is e^{a - i t}
  cplx shift_symbol = std::exp(cplx{z.imag(), -z.real()});
  cplx pole_gap = shift_symbol - std::exp(alpha);
  if (std::abs(pole_gap) < 1e-12 * (std::abs(shift_symbol) + std::abs(std::exp(alpha))))
    fail(errc::symbol_pole,
         "symbol pole on line: e^{a-it} equals e^{alpha}; Re(alpha) coincides with the line "
         "height, so e^{alpha} lies on the shift's spectral circle through this line");
  return cplx{1.0, 0.0} / pole_gap;
}

}  // namespace ak
