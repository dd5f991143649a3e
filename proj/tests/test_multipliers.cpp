// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/fourier.hpp"
#include "core/multiplier.hpp"

using namespace ak;

namespace {
const Grid kGrid{64.0, 1.0 / 16.0};

Kernel triangle_kernel(const Grid& g) {
  SampledFunction f(g);
  f.support = Interval{-1.0, 1.0};
  for (std::size_t j = f.support_begin(); j < f.support_end(); ++j) {
    double x = g.point(j);
    if (std::abs(x) <= 1.0) f.values[j] = 1.0 - std::abs(x);
  }
  return Kernel(std::move(f));
}

Kernel box_kernel(const Grid& g) { return Kernel(make_indicator(g, 0.0, 1.0)); }

double max_diff(const SampledFunction& a, const SampledFunction& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j)
    d = std::max(d, std::abs(a.values[j] - b.values[j]));
  return d;
}
}  // namespace

TEST_CASE("convolution: identity, indicators, sifting") {
  Weight unit = make_builtin_weight("constant");
  Kernel delta(make_delta(kGrid, 0.0));
  SampledFunction f = make_bump(kGrid, 0.3, 2.5);
  CHECK(max_diff(apply_convolution(delta, f), f) <= 1e-12);

  SUBCASE("box * box is the triangle hat on [0,2]") {
    Kernel box = box_kernel(kGrid);
    SampledFunction hat = apply_convolution(box, box.phi);
    CHECK(hat.support->lo == 0.0);
    CHECK(hat.support->hi == 2.0);
    // continuum oracle: peak 1 at x = 1, sides linear; half-end sampling
    // leaves an O(h) edge defect
    CHECK(std::abs(hat.values[kGrid.index_near(1.0)] - 1.0) <= kGrid.step);
    CHECK(std::abs(hat.values[kGrid.index_near(0.5)] - 0.5) <= kGrid.step);
    CHECK(std::abs(hat.values[kGrid.index_near(1.75)] - 0.25) <= kGrid.step);
  }

  SUBCASE("kernel at c sifts a delta to c") {
    Kernel bump(make_bump(kGrid, 3.0, 2.0));
    SampledFunction sifted = apply_convolution(bump, make_delta(kGrid, 0.0));
    CHECK(max_diff(sifted, make_bump(kGrid, 3.0, 2.0)) <= 1e-12);
  }

  SUBCASE("direct and fast paths agree") {
    Kernel wide(make_bump(kGrid, 0.0, 9.0));  // 144 samples: the fast path's regime
    SampledFunction d = apply_convolution(wide, f, ConvPath::direct);
    SampledFunction q = apply_convolution(wide, f, ConvPath::fast);
    CHECK(max_diff(d, q) <= 1e-10);
  }

  SUBCASE("linearity") {
    Kernel tri = triangle_kernel(kGrid);
    SampledFunction g = make_gaussian_truncated(kGrid, 1.0);
    cplx lam{0.7, -1.3};
    SampledFunction fg(kGrid);
    for (std::size_t j = 0; j < fg.values.size(); ++j)
      fg.values[j] = f.values[j] + lam * g.values[j];
    fg.support = Interval{std::min(f.support->lo, g.support->lo),
                          std::max(f.support->hi, g.support->hi)};
    SampledFunction lhs = apply_convolution(tri, fg);
    SampledFunction r1 = apply_convolution(tri, f), r2 = apply_convolution(tri, g);
    double err = 0.0;
    for (std::size_t j = 0; j < lhs.values.size(); ++j)
      err = std::max(err, std::abs(lhs.values[j] - r1.values[j] - lam * r2.values[j]));
    CHECK(err <= 1e-9 * (weighted_norm(f, unit) + std::abs(lam) * weighted_norm(g, unit)));
  }

  SUBCASE("support overflow raises a truncation error") {
    Kernel tri = triangle_kernel(kGrid);
    CHECK_THROWS_AS(apply_convolution(tri, make_bump(kGrid, 63.0, 2.0)), Error);
  }
}

TEST_CASE("kernel algebra") {
  Kernel delta(make_delta(kGrid, 0.0));
  Kernel tri = triangle_kernel(kGrid);
  CHECK(max_diff(convolve_kernels(delta, tri).phi, tri.phi) <= 1e-12);

  SUBCASE("multiplicativity: operator composition equals kernel convolution") {
    Weight unit = make_builtin_weight("constant");
    Kernel box = box_kernel(kGrid);
    SampledFunction f = make_bump(kGrid, -0.5, 3.0);
    SampledFunction via_ops =
        Multiplier::convolution(tri).apply(Multiplier::convolution(box).apply(f));
    SampledFunction via_kernels = apply_convolution(convolve_kernels(tri, box), f);
    CHECK(max_diff(via_ops, via_kernels) <= 1e-9 * weighted_norm(f, unit));
  }

  SUBCASE("bump * bump is symmetric about the doubled center") {
    Kernel b(make_bump(kGrid, 1.0, 2.0));
    Kernel bb = convolve_kernels(b, b);
    std::size_t c = kGrid.index_near(2.0);
    for (std::size_t d = 1; d <= 24; ++d)
      CHECK(std::abs(bb.phi.values[c + d] - bb.phi.values[c - d]) <= 1e-12);
  }
}

TEST_CASE("operator norms on the window subspace") {
  Weight unit = make_builtin_weight("constant");
  Grid g{128.0, 1.0 / 16.0};

  SUBCASE("identity kernel has norm 1") {
    NormEstimate est =
        operator_norm(Multiplier::convolution(Kernel(make_delta(g, 0.0))), unit, g, 1e-10, 64.0);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(est.converged);
  }

  SUBCASE("triangle kernel on the unweighted space: norm 1 at window >= 64") {
    Multiplier m = Multiplier::convolution(triangle_kernel(g));
    NormEstimate est = operator_norm(m, unit, g, 1e-11, 64.0);
    CHECK(std::abs(est.value - 1.0) <= 1e-3);
    CHECK(est.window_half_width == 64.0);
  }

  SUBCASE("composition squares the norm of a normal operator") {
    Multiplier m = Multiplier::convolution(triangle_kernel(g));
    double single = operator_norm(m, unit, g, 1e-11, 48.0).value;
    double composed =
        operator_norm(Multiplier::composition({m, m}), unit, g, 1e-11, 48.0).value;
    CHECK(std::abs(composed - single * single) <= 1e-3);
  }

  SUBCASE("window monotonicity") {
    Multiplier m = Multiplier::convolution(triangle_kernel(g));
    double n32 = operator_norm(m, unit, g, 1e-11, 32.0).value;
    double n64 = operator_norm(m, unit, g, 1e-11, 64.0).value;
    double n96 = operator_norm(m, unit, g, 1e-11, 96.0).value;
    CHECK(n32 <= n64 + 1e-9);
    CHECK(n64 <= n96 + 1e-9);
  }

  SUBCASE("rejects nonpositive tolerance") {
    Multiplier m = Multiplier::convolution(triangle_kernel(g));
    CHECK_THROWS_AS(operator_norm(m, unit, g, 0.0, 32.0), Error);
  }
}

TEST_CASE("commutation with translations") {
  Weight unit = make_builtin_weight("constant");
  Weight vee = make_builtin_weight("exp_poly", {0.0});
  auto probes = standard_probes(kGrid);
  Kernel tri = triangle_kernel(kGrid);

  SUBCASE("convolutions commute to rounding") {
    Multiplier m = Multiplier::convolution(tri);
    for (double t : {1.0, -1.0, 2.0, -2.0, 5.0, -5.0}) {
      CHECK(commutation_residual(m, t, probes, unit) <= 1e-10);
      CHECK(commutation_residual(m, t, probes, vee) <= 1e-10);
    }
  }

  SUBCASE("compositions commute") {
    Multiplier m = Multiplier::composition(
        {Multiplier::convolution(tri), Multiplier::convolution(box_kernel(kGrid))});
    CHECK(commutation_residual(m, -2.0, probes, unit) <= 1e-10);
  }

  SUBCASE("resolvents commute") {
    Annulus ann = make_annulus(unit, 32);
    Multiplier m = Multiplier::resolvent(unit, cplx{std::log(2.0), 0.0}, 1e-10, &ann);
    for (double t : {1.0, -1.0, 5.0}) CHECK(commutation_residual(m, t, probes, unit) <= 1e-10);
  }

  SUBCASE("coordinate multiplication fails by the closed-form margin") {
    // (x f)(x - t) - x f(x - t) = -t f(x - t): the residual is exactly
    // |t| ||S_t f|| / ||f||, which is 1 at t = 1 on the unweighted space
    double r = commutation_residual(Multiplier::coordinate_diagnostic(), 1.0, probes, unit);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r >= 1e-2);
  }

  SUBCASE("boundary truncation is an error, not a small residual") {
    std::vector<SampledFunction> edge = {make_bump(kGrid, 61.0, 2.0)};
    Multiplier m = Multiplier::convolution(tri);
    CHECK_THROWS_AS(commutation_residual(m, 5.0, edge, unit), Error);
  }
}

TEST_CASE("mollifier sequences") {
  Kernel tri = triangle_kernel(kGrid);
  Weight unit = make_builtin_weight("constant");

  SUBCASE("mass is preserved") {
    double mass_tri = 0.0;
    for (const auto& v : tri.phi.values) mass_tri += v.real();
    for (int n : {4, 8, 16}) {
      Kernel phi_n = mollifier_sequence(tri, n);
      double mass_n = 0.0;
      for (const auto& v : phi_n.phi.values) mass_n += v.real();
      CHECK(std::abs((mass_n - mass_tri) * kGrid.step) <= 1e-9);
    }
  }

  SUBCASE("strong residuals decrease along the sequence") {
    // a grid fine enough that every mollifier width stays resolved; at
    // h = 1/16 the width-2h bumps collapse to the discrete delta and the
    // residuals tie at zero instead of decreasing
    Grid fine{16.0, 1.0 / 128.0};
    Kernel tri_fine = [&] {
      SampledFunction k(fine);
      k.support = Interval{-1.0, 1.0};
      for (std::size_t j = k.support_begin(); j < k.support_end(); ++j) {
        double x = fine.point(j);
        if (std::abs(x) <= 1.0) k.values[j] = 1.0 - std::abs(x);
      }
      return Kernel(std::move(k));
    }();
    SampledFunction f = make_bump(fine, 0.0, 3.0);
    SampledFunction mf = Multiplier::convolution(tri_fine).apply(f);
    double prev = 1e300;
    for (int n : {4, 8, 16, 32}) {
      SampledFunction diff = Multiplier::convolution(mollifier_sequence(tri_fine, n)).apply(f);
      for (std::size_t j = 0; j < diff.values.size(); ++j) diff.values[j] -= mf.values[j];
      diff.shrink_support_to_nonzero();
      double r = weighted_norm(diff, unit) / weighted_norm(f, unit);
      CHECK(r < prev);
      prev = r;
    }
  }

  SUBCASE("a delta-like start reproduces the unit-mass bump itself") {
    Kernel delta(make_delta(kGrid, 0.0));
    Kernel phi8 = mollifier_sequence(delta, 8);
    SampledFunction j8 = make_bump(kGrid, 0.0, 1.0 / 8.0);
    double mass = 0.0;
    for (const auto& v : j8.values) mass += v.real() * kGrid.step;
    double worst = 0.0;
    for (std::size_t j = 0; j < j8.values.size(); ++j)
      worst = std::max(worst, std::abs(phi8.phi.values[j] - j8.values[j] / mass));
    CHECK(worst <= 1e-9);
  }

  SUBCASE("unresolved width is an error") {
    // width 1/32 < h = 1/16
    CHECK_THROWS_WITH_AS(mollifier_sequence(tri, 32), doctest::Contains("mollifier unresolved"),
                         Error);
  }
}

TEST_CASE("resolvent series") {
  Weight unit = make_builtin_weight("constant");
  Weight el = make_builtin_weight("exp_linear");
  Annulus ann_unit = make_annulus(unit, 32);
  Annulus ann_el = make_annulus(el, 64);
  SampledFunction f = make_bump(kGrid, 0.0, 2.0);
  const double tail = 1e-10;

  auto identity_residual = [&](const Weight& w, cplx alpha, const Annulus& ann) {
    SampledFunction tf = resolvent_neumann(w, alpha, f, tail, &ann);
    SampledFunction stf = translate_checked(tf, 1.0);
    SampledFunction resid(kGrid);
    cplx ea = std::exp(alpha);
    for (std::size_t j = 0; j < resid.values.size(); ++j)
      resid.values[j] = stf.values[j] - ea * tf.values[j] - f.values[j];
    resid.shrink_support_to_nonzero();
    return weighted_norm(resid, w);
  };

  SUBCASE("outer branch at e^alpha = 2 on the unweighted space") {
    CHECK(identity_residual(unit, cplx{std::log(2.0), 0.0}, ann_unit) <= 10.0 * tail);
  }
  SUBCASE("inner branch at e^alpha = 1 on the e^x space (circle radius e)") {
    CHECK(identity_residual(el, cplx{0.0, 0.0}, ann_el) <= 10.0 * tail);
  }
  SUBCASE("points on the unit circle are rejected") {
    CHECK_THROWS_WITH_AS(resolvent_neumann(unit, cplx{0.0, 0.0}, f, tail, &ann_unit),
                         doctest::Contains("inside spectrum"), Error);
  }
  SUBCASE("complex alpha works off the axis") {
    CHECK(identity_residual(unit, cplx{std::log(2.0), 1.1}, ann_unit) <= 10.0 * tail);
  }
}
