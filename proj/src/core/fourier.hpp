// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "sampled_function.hpp"

namespace ak {

// Uniform frequency grid t_k = t0 + k dt, k = 0..count-1.
struct FreqGrid {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t count = 0;

  static FreqGrid linspace(double lo, double hi, std::size_t n);
  double point(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  std::vector<double> points() const;
};

// F(t) = h * sum_j f_j e^{a x_j} e^{-i t x_j} with trapezoid end factors.
// Uses a chirp-z fast path on large grids; every fast evaluation is
// cross-checked against direct quadrature on a fixed pseudo-random subset.
std::vector<cplx> weighted_ft(const SampledFunction& f, double a, const FreqGrid& t);

// direct quadrature at a single frequency (the reference path)
cplx weighted_ft_point(const SampledFunction& f, double a, double t);

// entire extension of the transform of a compactly supported kernel;
// kernel_symbol(phi, t + i a) == weighted_ft_point(phi, a, t) by definition
cplx kernel_symbol(const SampledFunction& kernel, cplx z);

// raw linear convolution of two sample arrays via FFT (no grid scaling)
std::vector<cplx> linear_convolution_fft(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace ak
