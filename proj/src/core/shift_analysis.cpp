// SPDX-License-Identifier: Apache-2.0
#include "shift_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ak {
namespace {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double sse = 0.0;
};

// least squares of y against 1 and g
LinearFit fit_against(const std::vector<double>& g, const std::vector<double>& y) {
  const std::size_t n = g.size();
  double sg = 0.0, sy = 0.0, sgg = 0.0, sgy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sg += g[i];
    sy += y[i];
    sgg += g[i] * g[i];
    sgy += g[i] * y[i];
  }
  double det = static_cast<double>(n) * sgg - sg * sg;
  LinearFit fit;
  if (std::abs(det) < 1e-300) {
    fit.intercept = sy / static_cast<double>(n);
    fit.slope = 0.0;
  } else {
    fit.intercept = (sgg * sy - sg * sgy) / det;
    fit.slope = (static_cast<double>(n) * sgy - sg * sy) / det;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - fit.intercept - fit.slope * g[i];
    fit.sse += r * r;
  }
  return fit;
}

}  // namespace

double shift_norm(const Weight& w, double t, Interval domain, double step) {
  return std::exp(log_ratio_sup(w, t, domain, step));
}

NormSequence build_norm_sequence(const Weight& w, ShiftDirection dir, int n_max,
                                 bool prefer_closed_form, Interval domain, double step) {
  if (n_max < 1) fail(errc::invalid_arg, "norm sequence: n_max must be >= 1");
  NormSequence seq;
  seq.direction = dir;
  seq.from_closed_form = prefer_closed_form && w.has_closed_form();
  const double sign = dir == ShiftDirection::forward ? 1.0 : -1.0;
  seq.entries.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    double t = sign * static_cast<double>(n);
    double ln = seq.from_closed_form ? w.closed_form_log_ratio_sup(t)
                                     : log_ratio_sup(w, t, domain, step);
    if (!std::isfinite(ln)) fail(errc::invalid_weight, "invalid weight: non-finite shift norm");
    seq.entries.emplace_back(n, ln);
  }
  return seq;
}

// Gelfand-limit estimate. q_n = log_norm(n)/n converges to its infimum; the
// tail is extrapolated with the decay shapes the builtin families produce
// (1/n, log n / n, n^{beta-1}) and clamped by the infimum bound.
SpectralRadiusEstimate spectral_radius(const Weight& w, ShiftDirection dir, int n_max,
                                       bool prefer_closed_form, Interval domain, double step) {
  if (n_max < 8) fail(errc::invalid_arg, "spectral_radius: n_max must be >= 8");
  SpectralRadiusEstimate est;
  est.sequence = build_norm_sequence(w, dir, n_max, prefer_closed_form, domain, step);

  std::vector<double> q(est.sequence.entries.size());
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = est.sequence.entries[i].second / static_cast<double>(est.sequence.entries[i].first);
    inf = std::min(inf, q[i]);
  }
  est.fekete_inf = inf;

  // fit over the top half of the sequence
  std::vector<int> ns;
  std::vector<double> qt;
  for (std::size_t i = 0; i < q.size(); ++i) {
    int n = est.sequence.entries[i].first;
    if (n >= std::max(2, n_max / 2)) {
      ns.push_back(n);
      qt.push_back(q[i]);
    }
  }
  double spread = *std::max_element(qt.begin(), qt.end()) - *std::min_element(qt.begin(), qt.end());
  if (spread < 1e-12) {
    est.fit_raw = qt.back();
    est.log_value = std::min(est.fit_raw, inf);
    est.method = est.sequence.from_closed_form ? RadiusMethod::closed_form
                                               : RadiusMethod::fekete_limit;
    est.model = "constant";
    est.uncertainty = 0.5 * spread;
  } else {
    auto model_g = [&](const char* name, double beta) {
      std::vector<double> g(ns.size());
      for (std::size_t i = 0; i < ns.size(); ++i) {
        double n = static_cast<double>(ns[i]);
        if (name[0] == '1') g[i] = 1.0 / n;                       // 1/n
        else if (name[0] == 'l') g[i] = std::log(n) / n;          // log(n)/n
        else g[i] = std::pow(n, beta - 1.0);                      // n^(beta-1)
      }
      return g;
    };
    LinearFit best;
    best.sse = std::numeric_limits<double>::infinity();
    std::string best_name;
    for (const char* name : {"1/n", "log(n)/n"}) {
      LinearFit f = fit_against(model_g(name, 0.0), qt);
      if (f.sse < best.sse) {
        best = f;
        best_name = name;
      }
    }
    {  // n^(beta-1): coarse scan then local refinement of beta
      double beta_best = 0.5;
      LinearFit fbest;
      fbest.sse = std::numeric_limits<double>::infinity();
      for (double beta = 0.05; beta < 0.975; beta += 0.05) {
        LinearFit f = fit_against(model_g("p", beta), qt);
        if (f.sse < fbest.sse) {
          fbest = f;
          beta_best = beta;
        }
      }
      for (double span = 0.025; span > 1e-4; span *= 0.5)
        for (double beta : {beta_best - span, beta_best + span}) {
          if (beta <= 0.0 || beta >= 1.0) continue;
          LinearFit f = fit_against(model_g("p", beta), qt);
          if (f.sse < fbest.sse) {
            fbest = f;
            beta_best = beta;
          }
        }
      if (fbest.sse < best.sse) {
        best = fbest;
        best_name = "n^(beta-1), beta=" + std::to_string(beta_best);
      }
    }
    est.fit_raw = best.intercept;
    est.log_value = std::min(best.intercept, inf);
    est.method = RadiusMethod::fit_extrapolation;
    est.model = best_name;
    est.uncertainty = 0.5 * (inf - est.log_value);
  }
  est.value = std::exp(est.log_value);
  return est;
}

Strip make_strip(const Weight& w, int n_max) {
  SpectralRadiusEstimate fwd = spectral_radius(w, ShiftDirection::forward, n_max);
  SpectralRadiusEstimate bwd = spectral_radius(w, ShiftDirection::backward, n_max);
  Strip s;
  s.a_max = fwd.log_value;
  s.a_min = -bwd.log_value;
  s.u_max = fwd.uncertainty;
  s.u_min = bwd.uncertainty;
  if (s.a_min > s.a_max + 1e-9)
    fail(errc::internal, "strip endpoints violate rho(S) rho(S^-1) >= 1");
  s.interior_nonempty = s.a_min + s.u_min < s.a_max - s.u_max;
  return s;
}

Annulus annulus_from_strip(const Strip& s) {
  Annulus a;
  a.r_in = std::exp(s.a_min);
  a.r_out = std::exp(s.a_max);
  a.u_in = s.u_min;
  a.u_out = s.u_max;
  return a;
}

Annulus make_annulus(const Weight& w, int n_max) { return annulus_from_strip(make_strip(w, n_max)); }

}  // namespace ak
