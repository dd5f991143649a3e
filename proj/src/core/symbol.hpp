// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "fourier.hpp"
#include "multiplier.hpp"

namespace ak {

// Sampled symbol values on one horizontal line Im z = a of the strip.
struct SymbolLine {
  double a = 0.0;
  FreqGrid t;
  std::vector<cplx> values;
  std::vector<std::uint8_t> mask;  // 1 where extraction was well conditioned
  double max_spread = 0.0;         // worst probe disagreement over the mask
  double mask_coverage = 0.0;

  double sup_abs_on_mask() const;
};

struct SymbolStrip {
  std::vector<SymbolLine> lines;  // sorted by a
};

// Chebyshev-spaced line heights in [a_min, a_max], endpoints always included.
std::vector<double> chebyshev_lines(double a_min, double a_max, int count);

std::vector<SampledFunction> symbol_probes(const Grid& g);

// Per frequency: median over admissible probes of F[(Mf)_a] / F[(f)_a].
SymbolLine extract_symbol(const Multiplier& m, double a,
                          const std::vector<SampledFunction>& probes, const FreqGrid& t,
                          double floor_rel = 1e-8);

SymbolStrip extract_symbol_strip(const Multiplier& m, double a_min, double a_max, int line_count,
                                 const std::vector<SampledFunction>& probes, const FreqGrid& t,
                                 double floor_rel = 1e-8);

struct SymbolBoundReport {
  double strip_max = 0.0;       // B: max |kernel symbol| over the samples
  cplx arg_max{0.0, 0.0};
  double op_norm = 0.0;         // N at the base window
  double op_norm_doubled = 0.0; // N at the doubled window
  double window = 0.0;
  double rel_slack = 0.0;
  double margin = 0.0;          // N - B
  double margin_doubled = 0.0;
  bool margin_non_worsening = false;
  bool pass = false;
};

SymbolBoundReport verify_symbol_bound(const Kernel& k, const Weight& w,
                                      const std::vector<cplx>& strip_samples, double rel_slack,
                                      const Grid& grid, double window_half_width = 64.0);

// |contour integral of mu around the rectangle| / (perimeter * max |mu|),
// rectangle corners snapped to stored lines and t samples
double holomorphy_residual(const SymbolStrip& s, double t_lo, double t_hi, double a_lo,
                           double a_hi);

// 1 / (e^{a - i t} - e^{alpha}) at z = t + i a
cplx resolvent_symbol(cplx alpha, cplx z);

}  // namespace ak
