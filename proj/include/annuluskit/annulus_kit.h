/* SPDX-License-Identifier: Apache-2.0
 *
 * annuluskit: weighted-shift spectra, convolution multipliers and their
 * symbols on sampled weighted spaces L^2_w(R).
 *
 * C surface of the shared library. All handles are opaque; every function
 * returns an ak_status and reports failure detail through ak_last_error(),
 * which is thread-local. Heap-allocated results are released with the
 * matching *_free call; strings returned through char** are released with
 * ak_string_free.
 */
#ifndef ANNULUSKIT_ANNULUS_KIT_H
#define ANNULUSKIT_ANNULUS_KIT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ak_status {
  AK_OK = 0,
  AK_ERR_INVALID_ARG = 1,
  AK_ERR_INVALID_WEIGHT = 2,
  AK_ERR_OFF_GRID_SHIFT = 3,
  AK_ERR_SCALING_OVERFLOW = 4,
  AK_ERR_TRUNCATION = 5,
  AK_ERR_MOLLIFIER_UNRESOLVED = 6,
  AK_ERR_INSIDE_SPECTRUM = 7,
  AK_ERR_SYMBOL_POLE = 8,
  AK_ERR_NOT_INSIDE_CANDIDATE = 9,
  AK_ERR_PROBE_COVERAGE = 10,
  AK_ERR_BAD_CONFIG = 11,
  AK_ERR_IO = 12,
  AK_ERR_INTERNAL = 13
} ak_status;

typedef struct ak_weight ak_weight;
typedef struct ak_function ak_function;
typedef struct ak_multiplier ak_multiplier;

const char* ak_version(void);
/* message of the most recent failure on this thread ("" if none) */
const char* ak_last_error(void);
void ak_string_free(char* s);

/* ---- weights ----------------------------------------------------------- */

ak_status ak_weight_create(const char* name, const double* params, size_t n_params,
                           ak_weight** out);
ak_status ak_weight_from_table(const double* x, const double* log_w, size_t n, ak_weight** out);
ak_status ak_weight_from_table_csv(const char* path, ak_weight** out);
void ak_weight_free(ak_weight* w);

ak_status ak_weight_log_ratio_sup(const ak_weight* w, double t, double x_lo, double x_hi,
                                  double step, double* out);
/* JSON report of the admissibility check over the given offsets */
ak_status ak_weight_condition_json(const ak_weight* w, const double* offsets, size_t n_offsets,
                                   char** json_out);
/* bounding line log||S_t|| <= log_c + m |t| over the probed offsets */
ak_status ak_weight_growth_fit(const ak_weight* w, const double* t_grid, size_t n_t,
                               double* log_c, double* m, double* max_violation);

/* ---- shift analysis ----------------------------------------------------- */

ak_status ak_spectral_radius(const ak_weight* w, int backward, int n_max, double* value,
                             double* uncertainty);
ak_status ak_strip(const ak_weight* w, int n_max, double* a_min, double* a_max, double* u_min,
                   double* u_max);
ak_status ak_annulus(const ak_weight* w, int n_max, double* r_in, double* r_out);

/* ---- sampled functions -------------------------------------------------- */

/* kinds: "bump" (center, width); "gaussian_truncated" (sigma);
 * "plane_wave_window" (a, b, window_half_width, taper); "delta" (center);
 * "indicator" (lo, hi) */
ak_status ak_function_create(const char* kind, const double* params, size_t n_params,
                             double grid_half_width, double grid_step, ak_function** out);
ak_status ak_function_from_csv(const char* path, ak_function** out);
ak_status ak_function_to_csv(const ak_function* f, const char* path);
void ak_function_free(ak_function* f);

ak_status ak_weighted_norm(const ak_function* f, const ak_weight* w, double* out);
ak_status ak_translate(const ak_function* f, double t, ak_function** out);
ak_status ak_modulate(const ak_function* f, double alpha, ak_function** out);
ak_status ak_scale_exp(const ak_function* f, double a, ak_function** out);

/* ---- multipliers -------------------------------------------------------- */

ak_status ak_multiplier_convolution(const ak_function* kernel, ak_multiplier** out);
ak_status ak_multiplier_resolvent(const ak_weight* w, double alpha_re, double alpha_im,
                                  double tail_tol, ak_multiplier** out);
ak_status ak_multiplier_compose(ak_multiplier* const* parts, size_t n_parts, ak_multiplier** out);
void ak_multiplier_free(ak_multiplier* m);

ak_status ak_multiplier_apply(const ak_multiplier* m, const ak_function* f, ak_function** out);
ak_status ak_operator_norm(const ak_multiplier* m, const ak_weight* w, double grid_half_width,
                           double grid_step, double window_half_width, double rel_tol,
                           double* out);
ak_status ak_commutation_residual(const ak_multiplier* m, const ak_weight* w, double t,
                                  double grid_half_width, double grid_step, double* out);

/* ---- symbols and spectra ------------------------------------------------- */

ak_status ak_kernel_symbol(const ak_function* kernel, double z_re, double z_im, double* out_re,
                           double* out_im);
ak_status ak_resolvent_symbol(double alpha_re, double alpha_im, double z_re, double z_im,
                              double* out_re, double* out_im);
ak_status ak_weyl_residual(const ak_weight* w, double z_re, double z_im,
                           double window_half_width, double taper, double grid_half_width,
                           double grid_step, double* out);
/* smallest singular value of the n x n finite section of (z I - S); a
 * spectral-pollution diagnostic, not a certificate */
ak_status ak_finite_section_smin(const ak_weight* w, int n, double abs_z, double* out);

/* ---- report pipelines ---------------------------------------------------- */

/* Runs one command ("weight", "spectrum", "multiplier", "verify") with an
 * optional subcommand against a JSON config (NULL/"" = defaults). The JSON
 * report is returned; with a nonempty "out" field in the config the report
 * and raster/strip files are also written there. exit_code carries the
 * pass/fail convention of the CLI (0 pass, 1 check failure). */
ak_status ak_run_command(const char* command, const char* subcommand, const char* config_json,
                         char** report_json, int* exit_code);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ANNULUSKIT_ANNULUS_KIT_H */
