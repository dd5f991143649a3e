// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "error.hpp"

namespace ak {

// Uniform symmetric grid x_j = -L + j h, j = 0..N-1, N = 2L/h + 1.
// 1/h and L/h are required to be integral so that integer translations are
// exact index shifts and x = 0 is a grid point.
struct Grid {
  double half_width = 256.0;
  double step = 1.0 / 16.0;

  Grid() = default;
  Grid(double L, double h) : half_width(L), step(h) { validate(); }

  std::size_t size() const {
    return static_cast<std::size_t>(std::llround(2.0 * half_width / step)) + 1;
  }
  double point(std::size_t j) const { return -half_width + static_cast<double>(j) * step; }
  std::size_t zero_index() const {
    return static_cast<std::size_t>(std::llround(half_width / step));
  }

  bool on_grid(double t) const {
    double k = t / step;
    return std::abs(k - static_cast<double>(std::llround(k))) < 1e-9;
  }
  // signed index offset of a grid-multiple shift t
  std::int64_t offset_of(double t) const {
    if (!on_grid(t)) fail(errc::off_grid_shift, "off-grid shift: t is not an integer multiple of h");
    return std::llround(t / step);
  }
  // nearest index for a point inside [-L, L]
  std::size_t index_near(double x) const {
    auto j = std::llround((x + half_width) / step);
    if (j < 0) j = 0;
    auto n = static_cast<std::int64_t>(size());
    if (j >= n) j = n - 1;
    return static_cast<std::size_t>(j);
  }

  void validate() const {
    if (!(half_width > 0.0) || !(step > 0.0))
      fail(errc::invalid_arg, "grid: L and h must be positive");
    double inv = 1.0 / step;
    if (std::abs(inv - static_cast<double>(std::llround(inv))) > 1e-9)
      fail(errc::invalid_arg, "grid: 1/h must be an integer");
    double q = half_width / step;
    if (std::abs(q - static_cast<double>(std::llround(q))) > 1e-9)
      fail(errc::invalid_arg, "grid: L/h must be an integer");
  }

  bool operator==(const Grid&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

}  // namespace ak
