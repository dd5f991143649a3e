// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "grid.hpp"
#include "weight.hpp"

namespace ak {

using cplx = std::complex<double>;

// Complex-valued samples on a uniform grid, with optional compact-support
// metadata. Samples outside a declared support are exactly zero.
struct SampledFunction {
  Grid grid;
  std::vector<cplx> values;
  std::optional<Interval> support;

  SampledFunction() = default;
  explicit SampledFunction(const Grid& g) : grid(g), values(g.size(), cplx{0.0, 0.0}) {}

  // index range [lo, hi) that can hold nonzero samples
  std::size_t support_begin() const;
  std::size_t support_end() const;
  void shrink_support_to_nonzero();
};

double weighted_norm(const SampledFunction& f, const Weight& w);

struct TranslateStats {
  double dropped_mass_rel = 0.0;  // unweighted L2 fraction shifted off the grid
  bool truncated = false;         // dropped_mass_rel > 1e-12
};

// Exact index shift by a grid multiple; off-grid t raises off_grid_shift.
SampledFunction translate(const SampledFunction& f, double t, TranslateStats* stats = nullptr);
// As translate, but any dropped nonzero sample is an error (used wherever a
// silent truncation could fake a small residual).
SampledFunction translate_checked(const SampledFunction& f, double t);

SampledFunction modulate(const SampledFunction& f, double alpha);
SampledFunction scale_exp(const SampledFunction& f, double a);

SampledFunction make_bump(const Grid& g, double center, double width);
SampledFunction make_gaussian_truncated(const Grid& g, double sigma, double center = 0.0);
// e^{(a+ib)x} under a window that is 1 on [-W+taper, W-taper] and
// raised-cosine on the two taper edges; taper = 0 gives the sharp indicator
// with half-valued endpoint samples.
SampledFunction make_plane_wave_window(const Grid& g, double a, double b, double window_half_width,
                                       double taper);
SampledFunction make_delta(const Grid& g, double center = 0.0);
SampledFunction make_indicator(const Grid& g, double lo, double hi);

SampledFunction make_test_function(const Grid& g, const std::string& kind,
                                   const std::vector<double>& params);

void save_function_csv(const SampledFunction& f, const std::string& path);
SampledFunction load_function_csv(const std::string& path);

}  // namespace ak
