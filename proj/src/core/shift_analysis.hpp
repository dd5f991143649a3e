// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "weight.hpp"

namespace ak {

enum class ShiftDirection { forward, backward };

// log ||S_{+-n}|| for n = 1..n_max
struct NormSequence {
  ShiftDirection direction = ShiftDirection::forward;
  std::vector<std::pair<int, double>> entries;
  bool from_closed_form = false;
};

enum class RadiusMethod { closed_form, fekete_limit, fit_extrapolation };

struct SpectralRadiusEstimate {
  double value = 1.0;
  double log_value = 0.0;
  double uncertainty = 0.0;
  RadiusMethod method = RadiusMethod::fit_extrapolation;
  std::string model;       // decay model chosen for log_norm(n)/n
  double fit_raw = 0.0;    // extrapolated limit before the subadditivity clamp
  double fekete_inf = 0.0; // min_n log_norm(n)/n
  NormSequence sequence;
};

struct Strip {
  double a_min = 0.0;
  double a_max = 0.0;
  double u_min = 0.0;  // uncertainty carried from the backward estimate
  double u_max = 0.0;  // uncertainty carried from the forward estimate
  bool interior_nonempty = false;
};

struct Annulus {
  double r_in = 1.0;
  double r_out = 1.0;
  double u_in = 0.0;   // log-scale uncertainties, same as the strip's
  double u_out = 0.0;
};

double shift_norm(const Weight& w, double t, Interval domain = kDefaultSupDomain,
                  double step = kDefaultSupStep);

NormSequence build_norm_sequence(const Weight& w, ShiftDirection dir, int n_max,
                                 bool prefer_closed_form = true,
                                 Interval domain = kDefaultSupDomain,
                                 double step = kDefaultSupStep);

SpectralRadiusEstimate spectral_radius(const Weight& w, ShiftDirection dir, int n_max = 256,
                                       bool prefer_closed_form = true,
                                       Interval domain = kDefaultSupDomain,
                                       double step = kDefaultSupStep);

Strip make_strip(const Weight& w, int n_max = 256);
Annulus make_annulus(const Weight& w, int n_max = 256);
Annulus annulus_from_strip(const Strip& s);

}  // namespace ak
