// SPDX-License-Identifier: Apache-2.0
#include "spectrum.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace ak {
namespace {

constexpr double kResidualFloor = 1e-12;

struct NeumannRun {
  SampledFunction result;
  int terms = 0;
  double first_omitted_norm = 0.0;
  bool inner = false;
};

NeumannRun resolvent_neumann_run(const Weight& w, cplx alpha, const SampledFunction& f,
                                 double tail_tol, const Annulus& ann) {
  NeumannRun run{SampledFunction(f.grid), 0, 0.0, false};
  const double ra = alpha.real();
  bool outer;
  if (ra > std::log(ann.r_out) + 3.0 * ann.u_out + 1e-9) outer = true;
  else if (ra < std::log(ann.r_in) - 3.0 * ann.u_in - 1e-9) outer = false;
  else
    fail(errc::inside_spectrum,
         "inside spectrum: |e^alpha| lies in the spectral annulus of the shift, "
         "the resolvent series diverges");
  run.inner = !outer;
  run.result.support = f.support;
  SampledFunction term = f;
  cplx step_coeff = outer ? std::exp(-alpha) : std::exp(alpha);
  double shift = outer ? 1.0 : -1.0;
  cplx coeff = outer ? -std::exp(-alpha) : cplx{1.0, 0.0};
  if (!outer) term = translate_checked(term, -1.0);
  for (int n = 0; n < 100000; ++n) {
    double term_norm = std::abs(coeff) * weighted_norm(term, w);
    if (term_norm < tail_tol) {
      run.first_omitted_norm = term_norm;
      break;
    }
    for (std::size_t j = term.support_begin(); j < term.support_end(); ++j)
      run.result.values[j] += coeff * term.values[j];
    if (run.result.support && term.support)
      run.result.support = Interval{std::min(run.result.support->lo, term.support->lo),
                                    std::max(run.result.support->hi, term.support->hi)};
    ++run.terms;
    term = translate_checked(term, shift);
    coeff *= step_coeff;
  }
  return run;
}

// Taper window value at offset u from the center, half-width W.
double window_value(double u, double W, double taper) {
  double edge = W - std::abs(u);
  if (edge < 0.0) return 0.0;
  if (taper == 0.0) return edge == 0.0 ? 0.5 : 1.0;
  if (edge >= taper) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * edge / taper));
}

}  // namespace

// Residual of one windowed exponential certificate. All arithmetic pairs the
// vector with the weight, so only bounded exponent differences are ever
// exponentiated; the window-wide maximum of the paired exponent is divided
// out, which leaves the residual quotient unchanged.
double weyl_residual_candidate(const Weight& w, cplx z, double window_half_width, double taper,
                               const Grid& grid, const std::string& direction, double center) {
  const bool forward = direction == "forward";
  if (!forward && direction != "adjoint")
    fail(errc::invalid_arg, "weyl candidate: direction must be 'forward' or 'adjoint'");
  const double a = std::log(std::abs(z)), b = std::arg(z);
  const double W = window_half_width;
  if (!(W > 1.0 + taper)) fail(errc::invalid_arg, "weyl candidate: window too small");
  if (center - W - 1.0 < -grid.half_width || center + W + 1.0 > grid.half_width)
    fail(errc::invalid_arg, "weyl candidate: window does not fit the grid");

  // the numerator samples one unit past the window on both sides (the shift
  // and its adjoint look in opposite directions), so extend symmetrically
  const auto steps = static_cast<std::int64_t>(std::llround(1.0 / grid.step));
  const std::size_t j_lo = grid.index_near(center - W) - static_cast<std::size_t>(steps);
  const std::size_t j_hi = grid.index_near(center + W) + 1;  // window top (exclusive)
  const std::size_t n_ext = (j_hi - j_lo) + static_cast<std::size_t>(steps);

  std::vector<double> lw(n_ext), expo(n_ext), T(n_ext);
  double expo_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_ext; ++i) {
    double x = grid.point(j_lo + i);
    lw[i] = w.log_w(x);
    expo[i] = forward ? lw[i] - a * x : a * x - lw[i];
    T[i] = window_value(x - center, W, taper);
    if (T[i] > 0.0) expo_max = std::max(expo_max, expo[i]);
  }
  std::vector<cplx> p(n_ext, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < n_ext; ++i) {
    if (T[i] == 0.0) continue;
    double x = grid.point(j_lo + i);
    double ph = -b * x;
    p[i] = T[i] * std::exp(expo[i] - expo_max) * cplx{std::cos(ph), std::sin(ph)};
  }

  double p_sq = 0.0, num_sq = 0.0;
  const auto m = static_cast<std::int64_t>(n_ext);
  for (std::int64_t i = 0; i < m; ++i) {
    p_sq += std::norm(p[i]);
    cplx num;
    if (forward) {
      // (S f - z f)(x) w(x) = p(x-1) e^{lw(x)-lw(x-1)} - z p(x)
      cplx shifted = (i - steps >= 0 && p[i - steps] != cplx{0.0, 0.0})
                         ? p[i - steps] * std::exp(lw[i] - lw[i - steps])
                         : cplx{0.0, 0.0};
      num = shifted - z * p[i];
    } else {
      // (S* g - conj(z) g)(x) w(x) = q(x+1) e^{lw(x+1)-lw(x)} - conj(z) q(x)
      cplx shifted = (i + steps < m && p[i + steps] != cplx{0.0, 0.0})
                         ? p[i + steps] * std::exp(lw[i + steps] - lw[i])
                         : cplx{0.0, 0.0};
      num = shifted - std::conj(z) * p[i];
    }
    num_sq += std::norm(num);
  }
  if (!(p_sq > 0.0)) fail(errc::internal, "weyl candidate: window vector vanished");
  return std::sqrt(num_sq / p_sq);
}

double weyl_residual(const Weight& w, cplx z, double window_half_width, double taper,
                     const Grid& grid, const Strip& strip) {
  const double a = std::log(std::abs(z));
  if (!(a >= strip.a_min - strip.u_min - 1e-9) || !(a <= strip.a_max + strip.u_max + 1e-9))
    fail(errc::not_inside_candidate, "not an inside candidate: log|z| lies outside the strip");
  if (!(window_half_width + 1.0 + taper <= grid.half_width))
    fail(errc::invalid_arg, "weyl residual: window plus shift margin exceeds the grid");
  double best = std::numeric_limits<double>::infinity();
  for (const char* dir : {"forward", "adjoint"})
    for (double c : {0.0, -window_half_width, window_half_width}) {
      if (c - window_half_width - 1.0 < -grid.half_width ||
          c + window_half_width + 1.0 > grid.half_width)
        continue;
      best = std::min(best, weyl_residual_candidate(w, z, window_half_width, taper, grid, dir, c));
    }
  return best;
}

SpectrumClassification certify_inside(const Weight& w, cplx z,
                                      const std::vector<double>& window_schedule, const Grid& grid,
                                      const Strip& strip, double taper) {
  if (window_schedule.size() < 4)
    fail(errc::invalid_arg, "certify_inside: window schedule needs at least 4 entries");
  for (std::size_t i = 1; i < window_schedule.size(); ++i)
    if (!(window_schedule[i] > window_schedule[i - 1]))
      fail(errc::invalid_arg, "certify_inside: window schedule must increase");

  const double a_log = std::log(std::abs(z));
  if (!(a_log >= strip.a_min - strip.u_min - 1e-9) ||
      !(a_log <= strip.a_max + strip.u_max + 1e-9))
    fail(errc::not_inside_candidate, "not an inside candidate: log|z| lies outside the strip");

  SpectrumClassification cls;
  cls.z = z;
  for (double W : window_schedule) {
    double best = std::numeric_limits<double>::infinity();
    std::string best_name;
    for (const char* dir : {"forward", "adjoint"})
      for (double c : {0.0, -W, W}) {
        if (c - W - 1.0 < -grid.half_width || c + W + 1.0 > grid.half_width) continue;
        double r = weyl_residual_candidate(w, z, W, taper, grid, dir, c);
        if (r < best) {
          best = r;
          best_name = std::string(dir) + (c == 0.0 ? "/centered" : (c < 0.0 ? "/left" : "/right"));
        }
      }
    cls.weyl.windows.push_back(W);
    cls.weyl.residuals.push_back(best);
    cls.weyl.best_candidate = best_name;
  }

  // slope of log residual against log window, floor-saturated points dropped
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < cls.weyl.residuals.size(); ++i) {
    if (cls.weyl.residuals[i] < kResidualFloor) {
      cls.weyl.residual_collapsed = true;
      continue;
    }
    lx.push_back(std::log(cls.weyl.windows[i]));
    ly.push_back(std::log(cls.weyl.residuals[i]));
  }
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      num += (lx[i] - mx) * (ly[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    cls.weyl.slope = den > 0.0 ? num / den : 0.0;
  }

  const double final_residual = cls.weyl.residuals.back();
  if (cls.weyl.residual_collapsed && final_residual < kResidualFloor) {
    cls.verdict = Verdict::certified_inside;
    cls.note = "residual collapsed to the rounding floor (exact windowed eigenvector)";
  } else if (lx.size() >= 2 && cls.weyl.slope <= -0.4 && final_residual < 1e-1) {
    cls.verdict = Verdict::certified_inside;
  } else {
    cls.verdict = Verdict::undecided;
  }
  return cls;
}

SpectrumClassification certify_outside(const Weight& w, cplx z, double tail_tol,
                                       const std::vector<SampledFunction>& probes,
                                       const Annulus& ann) {
  if (probes.empty()) fail(errc::invalid_arg, "certify_outside: empty probe set");
  SpectrumClassification cls;
  cls.z = z;
  const double a = std::log(std::abs(z));
  const double lo = std::log(ann.r_in) - 3.0 * ann.u_in - 1e-9;
  const double hi = std::log(ann.r_out) + 3.0 * ann.u_out + 1e-9;
  if (a >= lo && a <= hi) {
    cls.verdict = Verdict::undecided;
    cls.margin_to_annulus = std::min(a - lo, hi - a);
    cls.note = "inside the uncertainty-inflated annulus: no outside certificate possible";
    return cls;
  }
  // the series needs roughly log(||f|| / tail_tol) / decay shifted terms; if
  // they cannot fit on the grid the point stays undecided rather than
  // crashing into the truncation guard
  cplx alpha{a, std::arg(z)};
  const double decay = a > hi ? a - std::log(ann.r_out) : std::log(ann.r_in) - a;
  double probe_reach = 0.0, probe_norm = 1.0;
  for (const auto& f : probes) {
    if (f.support)
      probe_reach = std::max({probe_reach, std::abs(f.support->lo), std::abs(f.support->hi)});
    probe_norm = std::max(probe_norm, weighted_norm(f, w));
  }
  const double room = probes.front().grid.half_width - probe_reach - 2.0;
  const double terms_needed = (std::log(probe_norm) - std::log(tail_tol)) / decay;
  if (terms_needed > room) {
    cls.verdict = Verdict::undecided;
    cls.margin_to_annulus = decay;
    cls.note = "series would outgrow the grid before reaching the tail tolerance; "
               "enlarge the grid or accept the undecided band near the annulus";
    return cls;
  }

  double worst = 0.0;
  int terms = 0;
  double omitted = 0.0;
  bool inner = false;
  try {
    for (const auto& f : probes) {
      NeumannRun run = resolvent_neumann_run(w, alpha, f, tail_tol, ann);
      SampledFunction s_tf = translate_checked(run.result, 1.0);
      SampledFunction resid(f.grid);
      for (std::size_t j = 0; j < resid.values.size(); ++j)
        resid.values[j] = s_tf.values[j] - z * run.result.values[j] - f.values[j];
      resid.shrink_support_to_nonzero();
      worst = std::max(worst, weighted_norm(resid, w));
      terms = std::max(terms, run.terms);
      omitted = std::max(omitted, run.first_omitted_norm);
      inner = run.inner;
    }
  } catch (const Error& e) {
    if (e.code() != errc::truncation) throw;
    cls.verdict = Verdict::undecided;
    cls.note = std::string("no certificate: ") + e.what();
    return cls;
  }
  cls.neumann.terms = terms;
  cls.neumann.tail_bound = omitted;
  cls.neumann.identity_residual = worst;
  cls.neumann.inner_branch = inner;
  cls.verdict = (omitted < tail_tol && worst <= 10.0 * tail_tol) ? Verdict::certified_outside
                                                                 : Verdict::undecided;
  return cls;
}

SpectrumMapResult spectrum_map(const Weight& w, const PolarRaster& raster, const Grid& grid,
                               const std::vector<double>& window_schedule, double taper,
                               double tail_tol) {
  if (raster.n_radii < 2 || raster.n_angles < 1 || !(raster.r_max > raster.r_min) ||
      !(raster.r_min > 0.0))
    fail(errc::invalid_arg, "spectrum map: malformed polar raster");
  SpectrumMapResult out;
  out.strip = make_strip(w);
  out.annulus = annulus_from_strip(out.strip);
  std::vector<SampledFunction> probes = {make_bump(grid, 0.0, 2.0),
                                         make_gaussian_truncated(grid, 0.5)};

  // the raster must sample the claimed spectrum radii themselves, or a
  // degenerate annulus (a circle) would always fall between raster cells:
  // snap the nearest radius to r_in and to r_out
  std::vector<double> radii(static_cast<std::size_t>(raster.n_radii));
  for (int ir = 0; ir < raster.n_radii; ++ir)
    radii[ir] = raster.r_min + (raster.r_max - raster.r_min) * static_cast<double>(ir) /
                                   static_cast<double>(raster.n_radii - 1);
  for (double target : {out.annulus.r_in, out.annulus.r_out}) {
    if (target < radii.front() || target > radii.back()) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < radii.size(); ++i)
      if (std::abs(radii[i] - target) < std::abs(radii[best] - target)) best = i;
    radii[best] = target;
  }

  out.inside_band_lo = std::numeric_limits<double>::infinity();
  out.inside_band_hi = -std::numeric_limits<double>::infinity();
  for (int ir = 0; ir < raster.n_radii; ++ir) {
    double r = radii[ir];
    // certificates depend on |z| only (the b-phase cancels in the windowed
    // exponential residual and in the series norms), so each circle is
    // classified once and the verdict is shared across angles
    SpectrumClassification inside, outside;
    bool inside_ran = false;
    const double a = std::log(r);
    if (a >= out.strip.a_min - out.strip.u_min - 1e-9 &&
        a <= out.strip.a_max + out.strip.u_max + 1e-9) {
      inside = certify_inside(w, cplx{r, 0.0}, window_schedule, grid, out.strip, taper);
      inside_ran = true;
    }
    outside = certify_outside(w, cplx{r, 0.0}, tail_tol, probes, out.annulus);
    Verdict verdict = Verdict::undecided;
    if (inside_ran && inside.verdict == Verdict::certified_inside) {
      verdict = Verdict::certified_inside;
      if (outside.verdict == Verdict::certified_outside) out.contradiction_free = false;
      out.inside_band_lo = std::min(out.inside_band_lo, r);
      out.inside_band_hi = std::max(out.inside_band_hi, r);
    } else if (outside.verdict == Verdict::certified_outside) {
      verdict = Verdict::certified_outside;
    }
    for (int it = 0; it < raster.n_angles; ++it) {
      double th = 2.0 * std::numbers::pi * static_cast<double>(it) /
                  static_cast<double>(raster.n_angles);
      SpectrumClassification cls = inside_ran ? inside : outside;
      if (verdict == Verdict::certified_outside) cls = outside;
      cls.z = cplx{r * std::cos(th), r * std::sin(th)};
      cls.verdict = verdict;
      if (inside_ran) cls.neumann = outside.neumann;
      switch (verdict) {
        case Verdict::certified_inside: ++out.n_inside; break;
        case Verdict::certified_outside: ++out.n_outside; break;
        case Verdict::undecided: ++out.n_undecided; break;
      }
      out.points.push_back(std::move(cls));
    }
  }
  if (out.n_inside == 0) {
    out.inside_band_lo = 0.0;
    out.inside_band_hi = 0.0;
  }
  return out;
}

double finite_section_smin(const Weight& w, int n, double abs_z) {
  if (n < 2 || n > 4096) fail(errc::invalid_arg, "finite section: n must lie in [2, 4096]");
  if (!(abs_z >= 0.0)) fail(errc::invalid_arg, "finite section: |z| must be >= 0");
  // centered integer lattice; basis delta_k / w(k). The section of z I - S is
  // lower bidiagonal with diagonal z and subdiagonal -w(k+1)/w(k); singular
  // values depend only on the entry moduli, hence only on |z|.
  const int m = n / 2;
  std::vector<double> d(static_cast<std::size_t>(n), abs_z);
  std::vector<double> e(static_cast<std::size_t>(n) - 1);
  for (int i = 0; i + 1 < n; ++i) {
    double k = static_cast<double>(i - m);
    e[static_cast<std::size_t>(i)] = std::exp(w.log_w(k + 1.0) - w.log_w(k));
  }
  double dummy = 0.0;
  int info = LAPACKE_dbdsqr(LAPACK_COL_MAJOR, 'L', n, 0, 0, 0, d.data(), e.data(), &dummy, 1,
                            &dummy, 1, &dummy, 1);
  if (info != 0) fail(errc::internal, "bidiagonal singular value computation failed");
  return d.back();  // descending order
}

std::vector<PseudospectrumPoint> finite_section_pseudospectrum(const Weight& w, int n,
                                                               const PolarRaster& raster,
                                                               double eps) {
  if (!(eps > 0.0)) fail(errc::invalid_arg, "pseudospectrum: eps must be positive");
  std::vector<PseudospectrumPoint> pts;
  for (int ir = 0; ir < raster.n_radii; ++ir) {
    double r = raster.r_min + (raster.r_max - raster.r_min) * static_cast<double>(ir) /
                                  std::max(1, raster.n_radii - 1);
    double smin = finite_section_smin(w, n, r);
    for (int it = 0; it < raster.n_angles; ++it) {
      double th = 2.0 * std::numbers::pi * static_cast<double>(it) /
                  static_cast<double>(raster.n_angles);
      pts.push_back({cplx{r * std::cos(th), r * std::sin(th)}, smin, smin <= eps});
    }
  }
  return pts;
}

}  // namespace ak
