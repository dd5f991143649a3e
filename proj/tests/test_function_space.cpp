// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "core/sampled_function.hpp"

using namespace ak;

namespace {
const Grid kGrid{64.0, 1.0 / 16.0};

double max_diff(const SampledFunction& a, const SampledFunction& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j)
    d = std::max(d, std::abs(a.values[j] - b.values[j]));
  return d;
}
}  // namespace

TEST_CASE("grid invariants") {
  CHECK(kGrid.size() == 2049);
  CHECK(kGrid.point(kGrid.zero_index()) == 0.0);
  CHECK(kGrid.on_grid(0.25));
  CHECK_FALSE(kGrid.on_grid(0.26));
  CHECK_THROWS_AS(Grid(64.0, 0.3), Error);        // 1/h not integral
  CHECK_THROWS_AS(Grid(64.03, 1.0 / 16.0), Error);  // L/h not integral
  CHECK_NOTHROW(Grid(256.0, 1.0));                  // h = 1 is legal, if coarse
}

TEST_CASE("weighted norm quadrature") {
  Weight unit = make_builtin_weight("constant");
  Grid fine{64.0, 0.01 > 0 ? 1.0 / 100.0 : 0.0};  // h = 0.01
  SampledFunction chi = make_indicator(fine, -1.0, 1.0);
  CHECK(weighted_norm(chi, unit) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-2));

  SampledFunction zero(kGrid);
  CHECK(weighted_norm(zero, unit) == 0.0);

  // f = e^{-x} on [0,10] has unit integrand against the e^{x} weight
  Weight el = make_builtin_weight("exp_linear");
  SampledFunction f(fine);
  f.support = Interval{0.0, 10.0};
  for (std::size_t j = f.support_begin(); j < f.support_end(); ++j) {
    double x = fine.point(j);
    if (x >= 0.0 && x <= 10.0) f.values[j] = std::exp(-x);
  }
  CHECK(weighted_norm(f, el) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-2));

  // truncated gaussian: spectrally accurate trapezoid, oracle = sqrt(pi)
  SampledFunction g = make_gaussian_truncated(kGrid, 1.0);
  double n2 = weighted_norm(g, unit);
  CHECK(std::abs(n2 * n2 - std::sqrt(std::numbers::pi)) < 1e-6);
}

TEST_CASE("translate is an exact index shift") {
  SampledFunction d = make_delta(kGrid, 0.0);
  SampledFunction moved = translate(d, 1.0);
  CHECK(std::abs(moved.values[kGrid.index_near(1.0)] - cplx{16.0, 0.0}) == 0.0);
  CHECK(moved.support->lo == doctest::Approx(1.0));

  SampledFunction f = make_bump(kGrid, 0.0, 2.0);
  CHECK(max_diff(translate(f, 0.0), f) == 0.0);

  SUBCASE("half-step shift against direct re-evaluation") {
    Grid coarse{8.0, 0.25};
    SampledFunction chi = make_indicator(coarse, -1.0, 1.0);
    SampledFunction shifted = translate(chi, 0.5);
    SampledFunction expected = make_indicator(coarse, -0.5, 1.5);
    CHECK(max_diff(shifted, expected) == 0.0);
  }

  SUBCASE("composition of grid shifts is exact") {
    SampledFunction two_step = translate(translate(f, 1.5), -0.5);
    CHECK(max_diff(two_step, translate(f, 1.0)) == 0.0);
  }

  SUBCASE("off-grid shifts are rejected") {
    CHECK_THROWS_WITH_AS(translate(f, 0.013), doctest::Contains("off-grid"), Error);
  }

  SUBCASE("truncation accounting") {
    TranslateStats stats;
    translate(make_bump(kGrid, 62.0, 2.0), 2.0, &stats);
    CHECK(stats.truncated);
    CHECK(stats.dropped_mass_rel > 0.1);
    CHECK_THROWS_AS(translate_checked(make_bump(kGrid, 62.0, 2.0), 2.0), Error);
    TranslateStats clean;
    translate(f, 5.0, &clean);
    CHECK_FALSE(clean.truncated);
  }
}

TEST_CASE("modulation is a weighted isometry") {
  Weight el = make_builtin_weight("exp_linear");
  Weight unit = make_builtin_weight("constant");
  SampledFunction f = make_bump(kGrid, 0.5, 3.0);
  double n0 = weighted_norm(f, el);
  CHECK(max_diff(modulate(f, 0.0), f) == 0.0);
  for (double alpha : {std::numbers::pi, 0.37, 12.0}) {
    CHECK(std::abs(weighted_norm(modulate(f, alpha), el) - n0) <= 1e-13 * n0);
    CHECK(std::abs(weighted_norm(modulate(f, alpha), unit) - weighted_norm(f, unit)) <=
          1e-13 * n0);
  }
  // pointwise definition
  SampledFunction chi = make_indicator(kGrid, 0.0, 1.0);
  SampledFunction m = modulate(chi, 2.0 * std::numbers::pi);
  std::size_t j = kGrid.index_near(0.25);
  cplx expected = chi.values[j] * std::exp(cplx{0.0, 2.0 * std::numbers::pi * 0.25});
  CHECK(std::abs(m.values[j] - expected) < 1e-15);
}

TEST_CASE("exponential scaling") {
  SampledFunction f = make_bump(kGrid, 0.0, 2.0);
  CHECK(max_diff(scale_exp(f, 0.0), f) == 0.0);

  SampledFunction chi = make_indicator(kGrid, 0.0, 1.0);
  SampledFunction s = scale_exp(chi, 1.0);
  std::size_t j = kGrid.index_near(0.5);
  CHECK(std::abs(s.values[j] - std::exp(0.5)) < 1e-15);
  CHECK(s.support->lo == 0.0);
  CHECK(s.support->hi == 1.0);

  SUBCASE("round trip") {
    SampledFunction rt = scale_exp(scale_exp(f, -2.0), 2.0);
    CHECK(max_diff(rt, f) < 1e-13);
  }

  SUBCASE("norm transport: ||f e^{ax}||_unweighted equals ||f|| under e^{ax} weight") {
    Weight el = make_builtin_weight("exp_linear");
    Weight unit = make_builtin_weight("constant");
    double lhs = weighted_norm(scale_exp(f, 1.0), unit);
    double rhs = weighted_norm(f, el);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  }

  SUBCASE("overflow guard") {
    Grid big{512.0, 1.0 / 4.0};
    SampledFunction wide = make_indicator(big, -510.0, 510.0);
    CHECK_THROWS_WITH_AS(scale_exp(wide, 2.0), doctest::Contains("scaling overflow"), Error);
  }
}

TEST_CASE("translate norm bound against the ratio sup") {
  for (const char* name : {"constant", "exp_linear", "exp_poly"}) {
    Weight w = name == std::string("exp_poly") ? make_builtin_weight(name, {1.0})
                                               : make_builtin_weight(name);
    SampledFunction f = make_bump(kGrid, 0.0, 3.0);
    double bound = std::exp(log_ratio_sup(w, 2.0, {-64.0, 64.0}, 1.0 / 16.0));
    CHECK(weighted_norm(translate_checked(f, 2.0), w) <=
          bound * weighted_norm(f, w) + 1e-9);
  }
}

TEST_CASE("test-function constructors") {
  SampledFunction b = make_bump(kGrid, 0.0, 2.0);
  CHECK(b.support->lo == -1.0);
  CHECK(b.support->hi == 1.0);
  double mass = 0.0;
  for (const auto& v : b.values) mass += v.real();
  CHECK(mass * kGrid.step > 0.0);

  SampledFunction pw = make_plane_wave_window(kGrid, 0.0, 0.0, 60.0, 1.0);
  CHECK(std::abs(pw.values[kGrid.index_near(0.0)] - 1.0) == 0.0);
  CHECK(std::abs(pw.values[kGrid.index_near(59.5)]) < 1.0);  // taper edge
  CHECK(pw.values[kGrid.index_near(60.0) + 4] == cplx{0.0, 0.0});

  CHECK_THROWS_AS(make_bump(kGrid, 63.5, 2.0), Error);  // support exceeds grid
  CHECK_THROWS_AS(make_test_function(kGrid, "no_such_kind", {}), Error);

  SUBCASE("csv round trip") {
    const char* path = "function_io_test.csv";
    save_function_csv(b, path);
    SampledFunction back = load_function_csv(path);
    CHECK(back.grid == kGrid);
    CHECK(max_diff(back, b) == 0.0);
    std::remove(path);
  }
}
