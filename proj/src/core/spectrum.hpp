// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "multiplier.hpp"

namespace ak {

enum class Verdict { certified_inside, certified_outside, undecided };

struct WeylEvidence {
  std::vector<double> windows;    // window half-widths probed
  std::vector<double> residuals;  // best certificate residual per window
  double slope = 0.0;             // log-log slope of residual vs window
  bool residual_collapsed = false;  // hit the rounding floor (exact eigenvector)
  std::string best_candidate;       // which windowed vector won at the last stage
};

struct NeumannEvidence {
  int terms = 0;
  double tail_bound = 0.0;
  double identity_residual = 0.0;  // ||(S - z) T f - f|| / ||f||, worst probe
  bool inner_branch = false;
};

struct SpectrumClassification {
  cplx z{0.0, 0.0};
  Verdict verdict = Verdict::undecided;
  WeylEvidence weyl;        // populated by the inside certifier
  NeumannEvidence neumann;  // populated by the outside certifier
  double margin_to_annulus = 0.0;  // log-distance used when undecided
  std::string note;
};

// ||S f - z f|| / ||f|| minimised over windowed exponential certificates in
// both the forward and the adjoint direction. Every branch is an honest
// residual bound, so the minimum is a valid certificate value.
double weyl_residual(const Weight& w, cplx z, double window_half_width, double taper,
                     const Grid& grid, const Strip& strip);
// single named candidate, mainly for the residual-law tests:
// direction "forward"/"adjoint", window centered at `center`
double weyl_residual_candidate(const Weight& w, cplx z, double window_half_width, double taper,
                               const Grid& grid, const std::string& direction, double center);

SpectrumClassification certify_inside(const Weight& w, cplx z,
                                      const std::vector<double>& window_schedule, const Grid& grid,
                                      const Strip& strip, double taper = 1.0);

SpectrumClassification certify_outside(const Weight& w, cplx z, double tail_tol,
                                       const std::vector<SampledFunction>& probes,
                                       const Annulus& annulus);

struct PolarRaster {
  double r_min = 0.5;
  double r_max = 1.5;
  int n_radii = 64;
  int n_angles = 32;
};

struct SpectrumMapResult {
  Annulus annulus;
  Strip strip;
  std::vector<SpectrumClassification> points;
  int n_inside = 0, n_outside = 0, n_undecided = 0;
  bool contradiction_free = true;
  // radius band actually certified inside (for the annulus-agreement check)
  double inside_band_lo = 0.0, inside_band_hi = 0.0;
};

SpectrumMapResult spectrum_map(const Weight& w, const PolarRaster& raster, const Grid& grid,
                               const std::vector<double>& window_schedule, double taper,
                               double tail_tol);

// Smallest singular value of the n x n finite section of (z I - S) on the
// weighted integer lattice basis. DIAGNOSTIC ONLY: truncations of two-sided
// shifts are nilpotent-like and their pseudospectra fill a disk rather than
// the true annulus, so this must never be read as a spectrum certificate.
double finite_section_smin(const Weight& w, int n, double abs_z);

struct PseudospectrumPoint {
  cplx z{0.0, 0.0};
  double smin = 0.0;
  bool in_eps_set = false;
};

std::vector<PseudospectrumPoint> finite_section_pseudospectrum(const Weight& w, int n,
                                                               const PolarRaster& raster,
                                                               double eps);

}  // namespace ak
