// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "core/symbol.hpp"

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
}  // namespace

TEST_CASE("weighted transform: quadrature oracles") {
  SUBCASE("indicator transform 2 sin(t)/t on the real line") {
    Grid fine{16.0, 1.0 / 64.0};
    SampledFunction chi = make_indicator(fine, -1.0, 1.0);
    for (double t : {0.5, 1.0, 2.0}) {
      cplx v = weighted_ft_point(chi, 0.0, t);
      CHECK(std::abs(v - 2.0 * std::sin(t) / t) < 1e-3);
    }
  }
  SUBCASE("zero frequency returns the discrete mass") {
    // the Hann bump's cosine part sums to exactly -1 over its 33 samples,
    // so the discrete mass is exactly half the width
    SampledFunction b = make_bump(kGrid, 0.0, 2.0);
    CHECK(std::abs(weighted_ft_point(b, 0.0, 0.0) - 1.0) <= 1e-12);
  }
  SUBCASE("exponential line weight: int_0^1 e^x dx") {
    SampledFunction chi = make_indicator(kGrid, 0.0, 1.0);
    CHECK(std::abs(weighted_ft_point(chi, 1.0, 0.0) - (std::exp(1.0) - 1.0)) < 1e-3);
  }
  SUBCASE("fast path equals direct quadrature") {
    SampledFunction f = make_gaussian_truncated(kGrid, 0.75);
    FreqGrid t = FreqGrid::linspace(-25.0, 25.0, 1024);
    auto fast = weighted_ft(f, 0.5, t);  // internal spot check runs too
    double scale = 0.0;
    for (const auto& v : fast) scale = std::max(scale, std::abs(v));
    std::mt19937_64 rng(7);
    for (int s = 0; s < 12; ++s) {
      std::size_t k = rng() % t.count;
      CHECK(std::abs(fast[k] - weighted_ft_point(f, 0.5, t.point(k))) <= 1e-9 * scale);
    }
  }
  SUBCASE("overflow is rejected up front") {
    SampledFunction wide = make_indicator(kGrid, -62.0, 62.0);
    CHECK_THROWS_AS(weighted_ft_point(wide, 12.0, 0.0), Error);
  }
}

TEST_CASE("kernel symbols") {
  Kernel tri = triangle_kernel(kGrid);
  SUBCASE("triangle has exact unit mass") {
    CHECK(std::abs(kernel_symbol(tri.phi, cplx{0.0, 0.0}) - 1.0) <= 1e-14);
  }
  SUBCASE("delta kernel has symbol 1 everywhere") {
    SampledFunction d = make_delta(kGrid, 0.0);
    for (cplx z : {cplx{0.0, 0.0}, cplx{3.0, 1.0}, cplx{-7.0, -0.5}})
      CHECK(std::abs(kernel_symbol(d, z) - 1.0) <= 1e-14);
  }
  SUBCASE("box kernel at z = i integrates e^x over [0,1]") {
    SampledFunction box = make_indicator(kGrid, 0.0, 1.0);
    CHECK(std::abs(kernel_symbol(box, cplx{0.0, 1.0}) - (std::exp(1.0) - 1.0)) < 1e-3);
  }
  SUBCASE("the kernel symbol is the a=0 weighted transform, same code path") {
    for (double t : {0.0, 1.3, -7.7})
      CHECK(std::abs(kernel_symbol(tri.phi, cplx{t, 0.0}) - weighted_ft_point(tri.phi, 0.0, t)) ==
            0.0);
  }
}

TEST_CASE("symbol extraction") {
  FreqGrid t = FreqGrid::linspace(-8.0 * std::numbers::pi, 8.0 * std::numbers::pi, 1024);
  auto probes = symbol_probes(kGrid);

  SUBCASE("identity multiplier extracts the constant 1") {
    Multiplier id = Multiplier::convolution(Kernel(make_delta(kGrid, 0.0)));
    for (double a : {-0.5, 0.0, 1.0}) {
      SymbolLine line = extract_symbol(id, a, probes, t);
      CHECK(line.mask_coverage >= 0.9);
      for (std::size_t k = 0; k < t.count; ++k)
        if (line.mask[k]) CHECK(std::abs(line.values[k] - 1.0) <= 1e-10);
    }
  }

  SUBCASE("convolution symbol equals the kernel transform on every line") {
    Kernel tri = triangle_kernel(kGrid);
    Multiplier m = Multiplier::convolution(tri);
    for (double a : {0.0, -1.0, 0.75}) {
      SymbolLine line = extract_symbol(m, a, probes, t);
      CHECK(line.mask_coverage >= 0.9);
      double worst = 0.0;
      for (std::size_t k = 0; k < t.count; ++k) {
        if (!line.mask[k]) continue;
        cplx exact = kernel_symbol(tri.phi, cplx{t.point(k), a});
        worst = std::max(worst, std::abs(line.values[k] - exact) / (1.0 + std::abs(exact)));
      }
      CHECK(worst <= 1e-8);
    }
  }

  SUBCASE("shift operator extracts e^{a - i t}") {
    Multiplier shift = Multiplier::convolution(Kernel(make_delta(kGrid, 1.0)));
    for (double a : {0.0, 0.5}) {
      SymbolLine line = extract_symbol(shift, a, probes, t);
      double worst = 0.0;
      for (std::size_t k = 0; k < t.count; ++k) {
        if (!line.mask[k]) continue;
        cplx exact = std::exp(cplx{a, -t.point(k)});
        worst = std::max(worst, std::abs(line.values[k] - exact));
      }
      CHECK(worst <= 1e-8);
    }
  }

  SUBCASE("probe spread stays under the mask tolerance") {
    Kernel tri = triangle_kernel(kGrid);
    SymbolLine line = extract_symbol(Multiplier::convolution(tri), 0.0, probes, t);
    CHECK(line.max_spread <= 1e-6 * 2.0);
  }

  SUBCASE("composition multiplies extracted lines") {
    Kernel tri = triangle_kernel(kGrid);
    Kernel box(make_indicator(kGrid, 0.0, 1.0));
    Multiplier mt = Multiplier::convolution(tri), mb = Multiplier::convolution(box);
    SymbolLine lt = extract_symbol(mt, 0.0, probes, t);
    SymbolLine lb = extract_symbol(mb, 0.0, probes, t);
    SymbolLine lc = extract_symbol(Multiplier::composition({mt, mb}), 0.0, probes, t);
    double worst = 0.0;
    for (std::size_t k = 0; k < t.count; ++k) {
      if (!(lt.mask[k] && lb.mask[k] && lc.mask[k])) continue;
      worst = std::max(worst, std::abs(lc.values[k] - lt.values[k] * lb.values[k]) /
                                  (1.0 + std::abs(lc.values[k])));
    }
    CHECK(worst <= 1e-6);
  }

  SUBCASE("frequencies outside every probe's reach raise probe_coverage") {
    // in-band frequencies (below the grid Nyquist) where the wide bump's
    // transform has fallen far beneath the admissibility floor
    std::vector<SampledFunction> narrow = {make_bump(kGrid, 0.0, 3.0)};
    FreqGrid far = FreqGrid::linspace(40.0, 50.0, 64);
    Multiplier id = Multiplier::convolution(Kernel(make_delta(kGrid, 0.0)));
    CHECK_THROWS_WITH_AS(extract_symbol(id, 0.0, narrow, far, 1e-2),
                         doctest::Contains("probes do not cover"), Error);
  }
}

TEST_CASE("convolution theorem as a property over lines and frequencies") {
  Kernel tri = triangle_kernel(kGrid);
  SampledFunction f = make_bump(kGrid, 0.5, 3.0);
  SampledFunction conv = apply_convolution(tri, f);
  for (double a : {-1.0, -0.25, 0.0, 0.5, 1.0}) {
    FreqGrid t = FreqGrid::linspace(-20.0, 20.0, 41);
    auto lhs = weighted_ft(conv, a, t);
    auto rhs = weighted_ft(f, a, t);
    for (std::size_t k = 0; k < t.count; ++k) {
      cplx sym = kernel_symbol(tri.phi, cplx{t.point(k), a});
      CHECK(std::abs(lhs[k] - sym * rhs[k]) <= 1e-8 * (1.0 + std::abs(lhs[k])));
    }
  }
}

TEST_CASE("symbol bound verification") {
  Weight unit = make_builtin_weight("constant");
  Grid g{128.0, 1.0 / 16.0};
  Kernel tri = triangle_kernel(g);

  SUBCASE("triangle on the unweighted space: equality within 1e-3") {
    std::vector<cplx> samples;
    // odd count so t = 0, where the symbol peaks at exactly 1, is sampled
    FreqGrid t = FreqGrid::linspace(-8.0 * std::numbers::pi, 8.0 * std::numbers::pi, 2049);
    for (std::size_t k = 0; k < t.count; ++k) samples.push_back(cplx{t.point(k), 0.0});
    SymbolBoundReport rep = verify_symbol_bound(tri, unit, samples, 1e-2, g, 64.0);
    CHECK(rep.strip_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rep.op_norm - rep.strip_max) <= 1e-3);
    CHECK(rep.pass);
    CHECK(rep.margin_non_worsening);
  }

  SUBCASE("delta kernel: both sides exactly 1") {
    Kernel d(make_delta(g, 0.0));
    std::vector<cplx> samples = {cplx{0.0, 0.0}, cplx{2.0, 0.0}};
    SymbolBoundReport rep = verify_symbol_bound(d, unit, samples, 1e-2, g, 32.0);
    CHECK(rep.strip_max == doctest::Approx(1.0));
    CHECK(rep.op_norm == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.pass);
  }
}

TEST_CASE("holomorphy residual by contour integration") {
  auto probes = std::vector<SampledFunction>{make_delta(kGrid, 0.0)};
  FreqGrid t = FreqGrid::linspace(-2.0, 2.0, 513);

  SUBCASE("constant symbol integrates to zero") {
    Multiplier id = Multiplier::convolution(Kernel(make_delta(kGrid, 0.0)));
    SymbolStrip strip = extract_symbol_strip(id, -1.0, 1.0, 65, probes, t);
    CHECK(holomorphy_residual(strip, -1.5, 1.5, -0.6, 0.6) <= 1e-12);
  }

  SUBCASE("shift symbol: residual is pure discretization and quarters") {
    Multiplier shift = Multiplier::convolution(Kernel(make_delta(kGrid, 1.0)));
    SymbolStrip s129 = extract_symbol_strip(shift, -1.0, 1.0, 129, probes, t);
    SymbolStrip s257 = extract_symbol_strip(shift, -1.0, 1.0, 257, probes, t);
    double r129 = holomorphy_residual(s129, -1.5, 1.5, -0.35, 0.35);
    double r257 = holomorphy_residual(s257, -1.5, 1.5, -0.35, 0.35);
    CHECK(r129 <= 1e-4);
    CHECK(r257 <= 0.5 * r129);
  }

  SUBCASE("rectangle touching the strip boundary is rejected") {
    Multiplier id = Multiplier::convolution(Kernel(make_delta(kGrid, 0.0)));
    SymbolStrip strip = extract_symbol_strip(id, -1.0, 1.0, 17, probes, t);
    CHECK_THROWS_WITH_AS(holomorphy_residual(strip, -1.0, 1.0, -1.0, 0.5),
                         doctest::Contains("boundary"), Error);
  }
}

TEST_CASE("resolvent symbol") {
  SUBCASE("direct evaluation") {
    cplx v = resolvent_symbol(cplx{std::log(2.0), 0.0}, cplx{0.0, 0.0});
    CHECK(std::abs(v - cplx{-1.0, 0.0}) <= 1e-14);
  }
  SUBCASE("sup over the real line is the circle-to-point distance") {
    double sup = 0.0;
    for (double t = -std::numbers::pi; t <= std::numbers::pi; t += 1e-3)
      sup = std::max(sup, std::abs(resolvent_symbol(cplx{std::log(2.0), 0.0}, cplx{t, 0.0})));
    CHECK(sup == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("pole when the line height equals Re(alpha)") {
    CHECK_THROWS_WITH_AS(resolvent_symbol(cplx{0.0, 0.7}, cplx{-0.7, 0.0}),
                         doctest::Contains("pole"), Error);
  }
  SUBCASE("agreement with the extracted resolvent line") {
    Weight unit = make_builtin_weight("constant");
    Annulus ann = make_annulus(unit, 32);
    const double tail = 1e-8;
    Multiplier res = Multiplier::resolvent(unit, cplx{std::log(2.0), 0.0}, tail, &ann);
    FreqGrid t = FreqGrid::linspace(-6.0, 6.0, 241);
    SymbolLine line = extract_symbol(res, 0.0, symbol_probes(kGrid), t);
    double worst = 0.0;
    for (std::size_t k = 0; k < t.count; ++k) {
      if (!line.mask[k]) continue;
      cplx exact = resolvent_symbol(cplx{std::log(2.0), 0.0}, cplx{t.point(k), 0.0});
      worst = std::max(worst, std::abs(line.values[k] - exact));
    }
    CHECK(worst <= 10.0 * tail);
  }
}
