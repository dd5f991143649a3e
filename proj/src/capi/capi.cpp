// SPDX-License-Identifier: Apache-2.0
#include "annuluskit/annulus_kit.h"

#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/fourier.hpp"
#include "core/multiplier.hpp"
#include "core/report.hpp"
#include "core/spectrum.hpp"
#include "core/symbol.hpp"

namespace {

thread_local std::string g_last_error;

ak_status status_of(ak::errc code) {
  switch (code) {
    case ak::errc::invalid_arg: return AK_ERR_INVALID_ARG;
    case ak::errc::invalid_weight: return AK_ERR_INVALID_WEIGHT;
    case ak::errc::off_grid_shift: return AK_ERR_OFF_GRID_SHIFT;
    case ak::errc::scaling_overflow: return AK_ERR_SCALING_OVERFLOW;
    case ak::errc::truncation: return AK_ERR_TRUNCATION;
    case ak::errc::mollifier_unresolved: return AK_ERR_MOLLIFIER_UNRESOLVED;
    case ak::errc::inside_spectrum: return AK_ERR_INSIDE_SPECTRUM;
    case ak::errc::symbol_pole: return AK_ERR_SYMBOL_POLE;
    case ak::errc::not_inside_candidate: return AK_ERR_NOT_INSIDE_CANDIDATE;
    case ak::errc::probe_coverage: return AK_ERR_PROBE_COVERAGE;
    case ak::errc::bad_config: return AK_ERR_BAD_CONFIG;
    case ak::errc::io: return AK_ERR_IO;
    default: return AK_ERR_INTERNAL;
  }
}

template <typename Fn>
ak_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return AK_OK;
  } catch (const ak::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AK_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct ak_weight {
  ak::Weight w;
};
struct ak_function {
  ak::SampledFunction f;
};
struct ak_multiplier {
  ak::Multiplier m;
};

extern "C" {

const char* ak_version(void) { return "0.1.0"; }
const char* ak_last_error(void) { return g_last_error.c_str(); }
void ak_string_free(char* s) { delete[] s; }

/* ---- weights ----------------------------------------------------------- */

ak_status ak_weight_create(const char* name, const double* params, size_t n_params,
                           ak_weight** out) {
  return guard([&] {
    if (!name || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    std::vector<double> p(params, params + n_params);
    *out = new ak_weight{ak::make_builtin_weight(name, p)};
  });
}

ak_status ak_weight_from_table(const double* x, const double* log_w, size_t n, ak_weight** out) {
  return guard([&] {
    if (!x || !log_w || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = new ak_weight{
        ak::make_table_weight(std::vector<double>(x, x + n), std::vector<double>(log_w, log_w + n))};
  });
}

ak_status ak_weight_from_table_csv(const char* path, ak_weight** out) {
  return guard([&] {
    if (!path || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = new ak_weight{ak::load_weight_table_csv(path)};
  });
}

void ak_weight_free(ak_weight* w) { delete w; }

ak_status ak_weight_log_ratio_sup(const ak_weight* w, double t, double x_lo, double x_hi,
                                  double step, double* out) {
  return guard([&] {
    if (!w || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = ak::log_ratio_sup(w->w, t, {x_lo, x_hi}, step);
  });
}

ak_status ak_weight_condition_json(const ak_weight* w, const double* offsets, size_t n_offsets,
                                   char** json_out) {
  return guard([&] {
    if (!w || !offsets || !json_out) ak::fail(ak::errc::invalid_arg, "null argument");
    auto rep = ak::check_weight_condition(w->w, std::vector<double>(offsets, offsets + n_offsets));
    ak::ordered_json j;
    j["all_stable"] = rep.all_stable;
    j["offsets"] = ak::ordered_json::array();
    for (const auto& o : rep.offsets)
      j["offsets"].push_back({{"offset", o.offset},
                              {"sup", o.sup_base},
                              {"sup_doubled_domain", o.sup_doubled},
                              {"rel_change", o.rel_change},
                              {"stable", o.stable}});
    *json_out = dup_string(j.dump());
  });
}

ak_status ak_weight_growth_fit(const ak_weight* w, const double* t_grid, size_t n_t, double* log_c,
                               double* m, double* max_violation) {
  return guard([&] {
    if (!w || !t_grid || !log_c || !m || !max_violation)
      ak::fail(ak::errc::invalid_arg, "null argument");
    ak::H4Fit fit = ak::fit_h4(w->w, std::vector<double>(t_grid, t_grid + n_t));
    *log_c = fit.log_c;
    *m = fit.growth_rate;
    *max_violation = fit.max_violation;
  });
}

/* ---- shift analysis ----------------------------------------------------- */

ak_status ak_spectral_radius(const ak_weight* w, int backward, int n_max, double* value,
                             double* uncertainty) {
  return guard([&] {
    if (!w || !value) ak::fail(ak::errc::invalid_arg, "null argument");
    auto est = ak::spectral_radius(
        w->w, backward ? ak::ShiftDirection::backward : ak::ShiftDirection::forward, n_max);
    *value = est.value;
    if (uncertainty) *uncertainty = est.uncertainty;
  });
}

ak_status ak_strip(const ak_weight* w, int n_max, double* a_min, double* a_max, double* u_min,
                   double* u_max) {
  return guard([&] {
    if (!w || !a_min || !a_max) ak::fail(ak::errc::invalid_arg, "null argument");
    ak::Strip s = ak::make_strip(w->w, n_max);
    *a_min = s.a_min;
    *a_max = s.a_max;
    if (u_min) *u_min = s.u_min;
    if (u_max) *u_max = s.u_max;
  });
}

ak_status ak_annulus(const ak_weight* w, int n_max, double* r_in, double* r_out) {
  return guard([&] {
    if (!w || !r_in || !r_out) ak::fail(ak::errc::invalid_arg, "null argument");
    ak::Annulus a = ak::make_annulus(w->w, n_max);
    *r_in = a.r_in;
    *r_out = a.r_out;
  });
}

/* ---- sampled functions -------------------------------------------------- */

ak_status ak_function_create(const char* kind, const double* params, size_t n_params,
                             double grid_half_width, double grid_step, ak_function** out) {
  return guard([&] {
    if (!kind || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    ak::Grid g{grid_half_width, grid_step};
    std::vector<double> p(params, params + n_params);
    *out = new ak_function{ak::make_test_function(g, kind, p)};
  });
}

ak_status ak_function_from_csv(const char* path, ak_function** out) {
  return guard([&] {
    if (!path || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = new ak_function{ak::load_function_csv(path)};
  });
}

ak_status ak_function_to_csv(const ak_function* f, const char* path) {
  return guard([&] {
    if (!f || !path) ak::fail(ak::errc::invalid_arg, "null argument");
    ak::save_function_csv(f->f, path);
  });
}

void ak_function_free(ak_function* f) { delete f; }

ak_status ak_weighted_norm(const ak_function* f, const ak_weight* w, double* out) {
  return guard([&] {
    if (!f || !w || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = ak::weighted_norm(f->f, w->w);
  });
}

ak_status ak_translate(const ak_function* f, double t, ak_function** out) {
  return guard([&] {
    if (!f || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = new ak_function{ak::translate(f->f, t)};
  });
}

ak_status ak_modulate(const ak_function* f, double alpha, ak_function** out) {
  return guard([&] {
    if (!f || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = new ak_function{ak::modulate(f->f, alpha)};
  });
}

ak_status ak_scale_exp(const ak_function* f, double a, ak_function** out) {
  return guard([&] {
    if (!f || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = new ak_function{ak::scale_exp(f->f, a)};
  });
}

/* ---- multipliers -------------------------------------------------------- */

ak_status ak_multiplier_convolution(const ak_function* kernel, ak_multiplier** out) {
  return guard([&] {
    if (!kernel || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = new ak_multiplier{ak::Multiplier::convolution(ak::Kernel(kernel->f))};
  });
}

ak_status ak_multiplier_resolvent(const ak_weight* w, double alpha_re, double alpha_im,
                                  double tail_tol, ak_multiplier** out) {
  return guard([&] {
    if (!w || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = new ak_multiplier{ak::Multiplier::resolvent(w->w, {alpha_re, alpha_im}, tail_tol)};
  });
}

ak_status ak_multiplier_compose(ak_multiplier* const* parts, size_t n_parts, ak_multiplier** out) {
  return guard([&] {
    if (!parts || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    std::vector<ak::Multiplier> ps;
    for (size_t i = 0; i < n_parts; ++i) {
      if (!parts[i]) ak::fail(ak::errc::invalid_arg, "null multiplier in composition");
      ps.push_back(parts[i]->m);
    }
    *out = new ak_multiplier{ak::Multiplier::composition(std::move(ps))};
  });
}

void ak_multiplier_free(ak_multiplier* m) { delete m; }

ak_status ak_multiplier_apply(const ak_multiplier* m, const ak_function* f, ak_function** out) {
  return guard([&] {
    if (!m || !f || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = new ak_function{m->m.apply(f->f)};
  });
}

ak_status ak_operator_norm(const ak_multiplier* m, const ak_weight* w, double grid_half_width,
                           double grid_step, double window_half_width, double rel_tol,
                           double* out) {
  return guard([&] {
    if (!m || !w || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    ak::Grid g{grid_half_width, grid_step};
    *out = ak::operator_norm(m->m, w->w, g, rel_tol, window_half_width).value;
  });
}

ak_status ak_commutation_residual(const ak_multiplier* m, const ak_weight* w, double t,
                                  double grid_half_width, double grid_step, double* out) {
  return guard([&] {
    if (!m || !w || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    ak::Grid g{grid_half_width, grid_step};
    *out = ak::commutation_residual(m->m, t, ak::standard_probes(g), w->w);
  });
}

/* ---- symbols and spectra ------------------------------------------------- */

ak_status ak_kernel_symbol(const ak_function* kernel, double z_re, double z_im, double* out_re,
                           double* out_im) {
  return guard([&] {
    if (!kernel || !out_re || !out_im) ak::fail(ak::errc::invalid_arg, "null argument");
    ak::cplx v = ak::kernel_symbol(kernel->f, {z_re, z_im});
    *out_re = v.real();
    *out_im = v.imag();
  });
}

ak_status ak_resolvent_symbol(double alpha_re, double alpha_im, double z_re, double z_im,
                              double* out_re, double* out_im) {
  return guard([&] {
    if (!out_re || !out_im) ak::fail(ak::errc::invalid_arg, "null argument");
    ak::cplx v = ak::resolvent_symbol({alpha_re, alpha_im}, {z_re, z_im});
    *out_re = v.real();
    *out_im = v.imag();
  });
}

ak_status ak_weyl_residual(const ak_weight* w, double z_re, double z_im, double window_half_width,
                           double taper, double grid_half_width, double grid_step, double* out) {
  return guard([&] {
    if (!w || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    ak::Grid g{grid_half_width, grid_step};
    ak::Strip s = ak::make_strip(w->w);
    *out = ak::weyl_residual(w->w, {z_re, z_im}, window_half_width, taper, g, s);
  });
}

ak_status ak_finite_section_smin(const ak_weight* w, int n, double abs_z, double* out) {
  return guard([&] {
    if (!w || !out) ak::fail(ak::errc::invalid_arg, "null argument");
    *out = ak::finite_section_smin(w->w, n, abs_z);
  });
}

/* ---- report pipelines ---------------------------------------------------- */

ak_status ak_run_command(const char* command, const char* subcommand, const char* config_json,
                         char** report_json, int* exit_code) {
  return guard([&] {
    if (!command) ak::fail(ak::errc::invalid_arg, "null command");
    ak::RunConfig cfg = ak::RunConfig::defaults();
    if (config_json && config_json[0] != '\0') {
      ak::ordered_json j;
      try {
        j = ak::ordered_json::parse(config_json);
      } catch (const nlohmann::json::exception& e) {
        ak::fail(ak::errc::bad_config, std::string("config parse error: ") + e.what());
      }
      cfg = ak::config_from_json(j);
    }
    ak::CommandResult result = ak::run_command(command, subcommand ? subcommand : "", cfg);
    if (report_json) *report_json = dup_string(result.report.dump(1) + "\n");
    if (exit_code) *exit_code = result.exit_code;
  });
}

} /* extern "C" */
