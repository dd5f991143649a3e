// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "core/weight.hpp"

using namespace ak;

namespace {

// independent dense-grid maximization of log w(x+t) - log w(x); indexed
// abscissae so the cusp families get probed right next to x = 0
double dense_sup_oracle(const Weight& w, double t, double lo = -100.0, double hi = 100.0,
                        double step = 1e-3) {
  double best = -1e300;
  auto count = static_cast<std::size_t>((hi - lo) / step) + 1;
  for (std::size_t j = 0; j < count; ++j) {
    double x = lo + static_cast<double>(j) * step;
    best = std::max(best, w.log_w(x + t) - w.log_w(x));
  }
  return best;
}

}  // namespace

TEST_CASE("builtin catalogue shapes") {
  Weight el = make_builtin_weight("exp_linear");
  CHECK(el.log_w(3.25) == doctest::Approx(3.25).epsilon(1e-15));
  CHECK(el.closed_form_log_ratio_sup(2.0) == doctest::Approx(2.0));
  CHECK(el.closed_form_log_ratio_sup(-2.0) == doctest::Approx(-2.0));

  Weight c = make_builtin_weight("constant");
  CHECK(c.log_w(17.0) == 0.0);
  CHECK(c.closed_form_log_ratio_sup(7.3) == 0.0);

  Weight se = make_builtin_weight("stretched_exp", {1.0, 0.5});
  CHECK(se.closed_form_log_ratio_sup(4.0) == doctest::Approx(2.0).epsilon(1e-14));
  // the sup is attained at x = 0; the dense grid must agree
  double oracle = dense_sup_oracle(se, 4.0, -50.0, 50.0);
  CHECK(std::abs(se.closed_form_log_ratio_sup(4.0) - oracle) < 1e-6);

  Weight poly = make_builtin_weight("polynomial", {1.0});
  CHECK(poly.log_w(1.0) == doctest::Approx(std::log(2.0)));

  CHECK_THROWS_WITH_AS(make_builtin_weight("no_such_family"), doctest::Contains("unknown weight"),
                       Error);
  CHECK_THROWS_AS(make_builtin_weight("stretched_exp", {1.0, 1.5}), Error);
  CHECK_THROWS_AS(make_builtin_weight("stretched_exp", {-1.0, 0.5}), Error);
  CHECK_THROWS_AS(make_builtin_weight("polynomial", {-2.0}), Error);
  CHECK_THROWS_AS(make_builtin_weight("exp_linear", {1.0}), Error);
}

TEST_CASE("polynomial ratio sup against the analytic alpha=2 maximizer") {
  // at alpha = 2 the interior maximizer solves x(x+t) = 1, giving
  // sup ratio = ((t + sqrt(t^2+4))/2)^2
  Weight poly = make_builtin_weight("polynomial", {2.0});
  for (double t : {0.5, 1.0, 3.0, 17.0}) {
    double expected = 2.0 * std::log(0.5 * (t + std::sqrt(t * t + 4.0)));
    CHECK(poly.closed_form_log_ratio_sup(t) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(poly.closed_form_log_ratio_sup(-t) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("log_ratio_sup sampled values") {
  Weight el = make_builtin_weight("exp_linear");
  CHECK(log_ratio_sup(el, 1.0, {-50.0, 50.0}, 0.01) == doctest::Approx(1.0).epsilon(1e-14));

  Weight c = make_builtin_weight("constant");
  CHECK(log_ratio_sup(c, 7.3, {-10.0, 10.0}, 0.1) == 0.0);

  Weight poly1 = make_builtin_weight("polynomial", {1.0});
  CHECK(log_ratio_sup(poly1, 1.0, {-50.0, 50.0}, 1e-3) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  SUBCASE("closed form dominates the sampled sup") {
    for (const char* name : {"exp_linear", "constant", "stretched_exp", "polynomial"}) {
      Weight w = name == std::string("stretched_exp") ? make_builtin_weight(name, {1.0, 0.5})
                 : name == std::string("polynomial")  ? make_builtin_weight(name, {2.0})
                                                      : make_builtin_weight(name);
      for (double t : {0.5, 1.0, 3.0, -2.0}) {
        double sampled = log_ratio_sup(w, t, {-100.0, 100.0}, 1e-3);
        CHECK(sampled <= w.closed_form_log_ratio_sup(t) + 1e-12);
        CHECK(std::abs(sampled - w.closed_form_log_ratio_sup(t)) < 1e-6);
      }
    }
  }

  SUBCASE("non-finite log weight is an invalid weight") {
    Weight bad;
    bad.id = "bad";
    bad.log_weight = [](double x) {
      return x < 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    CHECK_THROWS_WITH_AS(log_ratio_sup(bad, 1.0, {-10.0, 10.0}, 0.5),
                         doctest::Contains("invalid weight"), Error);
  }
}

TEST_CASE("ratio sup vanishes at zero offset and is submultiplicative") {
  for (const char* name : {"constant", "exp_linear", "exp_over_log", "exp_poly"}) {
    Weight w = name == std::string("exp_poly") ? make_builtin_weight(name, {1.0})
                                               : make_builtin_weight(name);
    CHECK(log_ratio_sup(w, 0.0, {-50.0, 50.0}, 0.01) == 0.0);
    for (auto [t, s] : {std::pair{1.0, 1.0}, {1.0, 2.5}, {-1.0, 2.0}, {0.5, -3.0}}) {
      double lhs = log_ratio_sup(w, t + s, {-50.0, 50.0}, 0.01);
      double rhs = log_ratio_sup(w, t, {-50.0, 50.0}, 0.01) +
                   log_ratio_sup(w, s, {-50.0, 50.0}, 0.01);
      CHECK(lhs <= rhs + 1e-9);
    }
  }
}

TEST_CASE("weight condition stability report") {
  Weight el = make_builtin_weight("exp_linear");
  auto rep = check_weight_condition(el, {1.0, -1.0}, {-50.0, 50.0});
  REQUIRE(rep.offsets.size() == 2);
  CHECK(rep.offsets[0].sup_base == doctest::Approx(1.0));
  CHECK(rep.offsets[1].sup_base == doctest::Approx(-1.0));
  CHECK(rep.all_stable);

  Weight c = make_builtin_weight("constant");
  auto repc = check_weight_condition(c, {5.0}, {-10.0, 10.0});
  CHECK(repc.offsets[0].sup_base == 0.0);
  CHECK(repc.all_stable);

  Weight eol = make_builtin_weight("exp_over_log");
  auto repl = check_weight_condition(eol, {1.0}, {-100.0, 100.0});
  CHECK(std::isfinite(repl.offsets[0].sup_base));
  CHECK(repl.all_stable);

  SUBCASE("a gaussian-type non-weight is reported unstable, not thrown") {
    Weight bad;
    bad.id = "exp_square";
    bad.log_weight = [](double x) { return x * x; };
    auto repb = check_weight_condition(bad, {1.0}, {-50.0, 50.0});
    CHECK_FALSE(repb.offsets[0].stable);
    CHECK_FALSE(repb.all_stable);
  }
}

TEST_CASE("growth-bound fit reproduces the family envelopes") {
  std::vector<double> t10, t20;
  for (int t = -10; t <= 10; ++t) t10.push_back(t);
  for (int t = -20; t <= 20; ++t) t20.push_back(t);

  H4Fit el = fit_h4(make_builtin_weight("exp_linear"), t10, {-50.0, 50.0});
  CHECK(el.growth_rate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(el.log_c == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(el.max_violation <= 1e-12);

  H4Fit c = fit_h4(make_builtin_weight("constant"), t10);
  CHECK(c.growth_rate == doctest::Approx(0.0));
  CHECK(c.log_c == doctest::Approx(0.0));

  H4Fit poly = fit_h4(make_builtin_weight("polynomial", {2.0}), t20, {-200.0, 200.0});
  CHECK(poly.growth_rate < 0.2);
  CHECK(poly.growth_rate > 0.0);
  CHECK(poly.max_violation <= 1e-9);
  CHECK(poly.t_range.lo == -20.0);
  CHECK(poly.t_range.hi == 20.0);
}

TEST_CASE("table weights interpolate and validate") {
  // an e^x table reproduces the exponential ratio exactly under linear
  // interpolation of the log
  std::vector<double> xs, lw;
  for (int k = -60; k <= 60; ++k) {
    xs.push_back(k);
    lw.push_back(k);
  }
  Weight t = make_table_weight(xs, lw);
  CHECK(log_ratio_sup(t, 1.0, {-50.0, 50.0}, 0.01) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.log_w(61.5) == doctest::Approx(61.5));  // boundary-slope extrapolation

  CHECK_THROWS_AS(make_table_weight({0.0}, {1.0}), Error);
  CHECK_THROWS_AS(make_table_weight({0.0, 0.0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(make_table_weight({0.0, 1.0}, {1.0, std::nan("")}), Error);

  SUBCASE("csv loader, log and omega column variants") {
    const char* path = "weight_table_test.csv";
    {
      std::ofstream out(path);
      out << "# columns=x,omega\n-1,0.5\n0,1\n1,2\n";
    }
    Weight w = load_weight_table_csv(path);
    CHECK(w.log_w(1.0) == doctest::Approx(std::log(2.0)));
    {
      std::ofstream out(path);
      out << "# columns=x,omega\n-1,-0.5\n0,1\n1,2\n";
    }
    CHECK_THROWS_WITH_AS(load_weight_table_csv(path), doctest::Contains("invalid weight"), Error);
    {
      std::ofstream out(path);
      out << "-1,not_a_number\n0,1\n1,2\n";
    }
    CHECK_THROWS_WITH_AS(load_weight_table_csv(path), doctest::Contains("malformed row"), Error);
    std::remove(path);
  }
}
