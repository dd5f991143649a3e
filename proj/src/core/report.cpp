// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fourier.hpp"
#include "spectrum.hpp"
#include "symbol.hpp"

namespace ak {
namespace {

namespace fs = std::filesystem;

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / name);
  if (!out) fail(errc::io, "cannot write " + name + " under '" + dir + "'");
  out << text;
}

ordered_json report_envelope(const char* command, const std::string& subcommand,
                             const RunConfig& cfg) {
  ordered_json j;
  j["command"] = command;
  if (!subcommand.empty()) j["subcommand"] = subcommand;
  j["config_hash"] = config_hash(cfg);
  j["tolerances"] = {{"rel_tol", cfg.rel_tol},
                     {"tail_tol", cfg.tail_tol},
                     {"rel_slack", cfg.rel_slack},
                     {"floor", cfg.floor_rel}};
  return j;
}

ordered_json radius_json(const SpectralRadiusEstimate& est) {
  ordered_json seq = ordered_json::array();
  for (const auto& [n, ln] : est.sequence.entries) seq.push_back({{"n", n}, {"log_norm", ln}});
  const char* method = est.method == RadiusMethod::closed_form      ? "closed_form"
                       : est.method == RadiusMethod::fekete_limit   ? "fekete_limit"
                                                                    : "fit_extrapolation";
  return ordered_json{{"value", est.value},
                      {"log_value", est.log_value},
                      {"uncertainty", est.uncertainty},
                      {"method", method},
                      {"model", est.model},
                      {"fit_raw", est.fit_raw},
                      {"fekete_inf", est.fekete_inf},
                      {"sequence_source", est.sequence.from_closed_form ? "closed_form" : "sampled"},
                      {"sequence", seq}};
}

std::vector<double> default_weyl_windows(const RunConfig& cfg) {
  if (!cfg.weyl_windows.empty()) return cfg.weyl_windows;
  double w_max = std::floor(0.5 * (cfg.grid_half_width - 2.0 - cfg.weyl_taper));
  return {std::ceil(w_max / 5.0), std::ceil(w_max / 2.5), std::ceil(w_max / 1.6), w_max};
}

PolarRaster raster_for(const RunConfig& cfg, const Annulus& ann) {
  PolarRaster r;
  r.r_min = cfg.raster_r_min > 0.0 ? cfg.raster_r_min : 0.5 * ann.r_in;
  r.r_max = cfg.raster_r_max > 0.0 ? cfg.raster_r_max : 1.5 * ann.r_out;
  r.n_radii = cfg.raster_radii;
  r.n_angles = cfg.raster_angles;
  return r;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::certified_inside: return "certified_inside";
    case Verdict::certified_outside: return "certified_outside";
    default: return "undecided";
  }
}

// ---------------------------------------------------------------------------

CommandResult cmd_weight(const RunConfig& cfg) {
  Weight w = weight_from_spec(cfg.weight);
  ordered_json j = report_envelope("weight", "", cfg);
  j["weight"] = w.id;

  const std::vector<double> offsets = {1.0, -1.0, 2.5, 5.0};
  WeightConditionReport cond = check_weight_condition(w, offsets);
  ordered_json joff = ordered_json::array();
  for (const auto& o : cond.offsets)
    joff.push_back({{"offset", o.offset},
                    {"sup", o.sup_base},
                    {"sup_doubled_domain", o.sup_doubled},
                    {"rel_change", o.rel_change},
                    {"stable", o.stable}});
  j["weight_condition"] = {{"offsets", joff}, {"all_stable", cond.all_stable}};

  std::vector<double> t_grid;
  for (int t = -10; t <= 10; ++t) t_grid.push_back(t);
  H4Fit fit = fit_h4(w, t_grid);
  bool bound_holds = fit.max_violation <= 1e-9;
  j["growth_bound"] = {{"log_c", fit.log_c},
                       {"m", fit.growth_rate},
                       {"max_violation", fit.max_violation},
                       {"t_range", {fit.t_range.lo, fit.t_range.hi}},
                       {"holds", bound_holds}};
  j["pass"] = cond.all_stable && bound_holds;
  return {j, j["pass"].get<bool>() ? 0 : 1};
}

CommandResult cmd_spectrum(const RunConfig& cfg, const std::string& sub) {
  Weight w = weight_from_spec(cfg.weight);
  ordered_json j = report_envelope("spectrum", sub, cfg);
  j["weight"] = w.id;
  int exit_code = 0;

  if (sub == "radius") {
    SpectralRadiusEstimate fwd = spectral_radius(w, ShiftDirection::forward, cfg.n_max);
    SpectralRadiusEstimate bwd = spectral_radius(w, ShiftDirection::backward, cfg.n_max);
    j["forward"] = radius_json(fwd);
    j["backward"] = radius_json(bwd);
    if (w.family == WeightFamily::stretched_exp && w.params.size() == 2 && w.params[0] > 0.0) {
      j["family_spectrum_discrepancy"] = true;
      j["family_spectrum_discrepancy_note"] =
          "for w(x) = e^{a|x|^b} with 0 < b < 1 the norm sequence is log||S^n|| = a n^b, so the "
          "Gelfand limit is 1 (unit circle); the annulus [e^{-a}, e^{a}] commonly quoted for this "
          "family is not reproduced by the sequence. Both the sequence oracle and the "
          "extrapolated estimate are reported; neither is asserted as ground truth.";
    } else {
      j["family_spectrum_discrepancy"] = false;
    }
    j["pass"] = true;
  } else if (sub == "strip") {
    Strip s = make_strip(w, cfg.n_max);
    j["strip"] = {{"a_min", s.a_min},
                  {"a_max", s.a_max},
                  {"u_min", s.u_min},
                  {"u_max", s.u_max},
                  {"interior_nonempty", s.interior_nonempty}};
    j["pass"] = true;
  } else if (sub == "annulus") {
    Annulus a = make_annulus(w, cfg.n_max);
    j["annulus"] = {{"r_in", a.r_in}, {"r_out", a.r_out}, {"u_in", a.u_in}, {"u_out", a.u_out}};
    j["pass"] = true;
  } else if (sub == "map") {
    Grid g{cfg.grid_half_width, cfg.grid_step};
    Annulus ann = make_annulus(w, cfg.n_max);
    SpectrumMapResult map = spectrum_map(w, raster_for(cfg, ann), g, default_weyl_windows(cfg),
                                         cfg.weyl_taper, cfg.tail_tol);
    j["annulus"] = {{"r_in", map.annulus.r_in}, {"r_out", map.annulus.r_out}};
    j["counts"] = {{"certified_inside", map.n_inside},
                   {"certified_outside", map.n_outside},
                   {"undecided", map.n_undecided}};
    j["inside_band"] = {map.inside_band_lo, map.inside_band_hi};
    j["contradiction_free"] = map.contradiction_free;
    j["pass"] = map.contradiction_free;
    exit_code = map.contradiction_free ? 0 : 1;
    if (!cfg.out_dir.empty()) {
      std::string tsv = "# re_z\tim_z\tverdict\tevidence\n";
      for (const auto& p : map.points) {
        double evidence = p.verdict == Verdict::certified_inside ? p.weyl.residuals.back()
                          : p.verdict == Verdict::certified_outside
                              ? p.neumann.identity_residual
                              : p.margin_to_annulus;
        tsv += std::to_string(p.z.real()) + "\t" + std::to_string(p.z.imag()) + "\t" +
               verdict_name(p.verdict) + "\t" + std::to_string(evidence) + "\n";
      }
      write_text(cfg.out_dir, "raster.tsv", tsv);
    }
  } else if (sub == "pseudo") {
    Annulus ann = make_annulus(w, cfg.n_max);
    PolarRaster raster = raster_for(cfg, ann);
    auto pts = finite_section_pseudospectrum(w, cfg.pseudo_n, raster, cfg.pseudo_eps);
    int in_eps = 0;
    for (const auto& p : pts) in_eps += p.in_eps_set ? 1 : 0;
    j["diagnostic_only"] = true;
    j["caveat"] =
        "finite sections of the two-sided shift are nilpotent-like; their pseudospectra fill a "
        "disk rather than the true annulus. This raster is a pollution exhibit and must not be "
        "used as a spectrum certificate; use the map command's two-sided certificates instead.";
    j["n"] = cfg.pseudo_n;
    j["eps"] = cfg.pseudo_eps;
    j["in_eps_count"] = in_eps;
    j["point_count"] = static_cast<int>(pts.size());
    j["pass"] = true;
    if (!cfg.out_dir.empty()) {
      std::string tsv = "# re_z\tim_z\tsmin\tin_eps\n";
      for (const auto& p : pts)
        tsv += std::to_string(p.z.real()) + "\t" + std::to_string(p.z.imag()) + "\t" +
               std::to_string(p.smin) + "\t" + (p.in_eps_set ? "1" : "0") + "\n";
      write_text(cfg.out_dir, "pseudo.tsv", tsv);
    }
  } else {
    fail(errc::bad_config, "unknown spectrum subcommand '" + sub + "'");
  }
  return {j, exit_code};
}

CommandResult cmd_multiplier(const RunConfig& cfg, const std::string& sub) {
  Weight w = weight_from_spec(cfg.weight);
  Grid g{cfg.grid_half_width, cfg.grid_step};
  Kernel kernel = kernel_by_id(cfg, g, cfg.kernel);
  Multiplier m = Multiplier::convolution(kernel);
  ordered_json j = report_envelope("multiplier", sub, cfg);
  j["weight"] = w.id;
  j["kernel"] = cfg.kernel;
  int exit_code = 0;

  if (sub == "norm") {
    NormEstimate est = operator_norm(m, w, g, cfg.rel_tol, cfg.norm_window);
    j["estimate"] = {{"value", est.value},
                     {"relative_tol", est.relative_tol},
                     {"iterations", est.iterations},
                     {"window", est.window_half_width},
                     {"converged", est.converged}};
    j["pass"] = est.converged;
    exit_code = est.converged ? 0 : 1;
  } else if (sub == "commute") {
    auto probes = standard_probes(g);
    ordered_json res = ordered_json::array();
    double worst = 0.0;
    for (double t : {1.0, -1.0, 2.0, -2.0, 5.0, -5.0}) {
      double r = commutation_residual(m, t, probes, w);
      worst = std::max(worst, r);
      res.push_back({{"t", t}, {"residual", r}});
    }
    double diag = commutation_residual(Multiplier::coordinate_diagnostic(), 1.0, probes, w);
    j["residuals"] = res;
    j["max_residual"] = worst;
    j["non_multiplier_diagnostic_residual"] = diag;
    j["pass"] = worst <= 1e-10 && diag >= 1e-2;
    exit_code = j["pass"].get<bool>() ? 0 : 1;
  } else if (sub == "symbol" || sub == "thm4") {
    Strip s = make_strip(w, cfg.n_max);
    FreqGrid t = FreqGrid::linspace(cfg.t_lo, cfg.t_hi, static_cast<std::size_t>(cfg.t_count));
    if (sub == "symbol") {
      SymbolStrip strip = extract_symbol_strip(m, s.a_min, s.a_max, cfg.line_count,
                                               symbol_probes(g), t, cfg.floor_rel);
      ordered_json lines = ordered_json::array();
      bool covered = true;
      for (const auto& line : strip.lines) {
        covered = covered && line.mask_coverage >= 0.9;
        lines.push_back({{"a", line.a},
                         {"mask_coverage", line.mask_coverage},
                         {"max_spread", line.max_spread},
                         {"sup_abs", line.sup_abs_on_mask()}});
      }
      j["strip"] = {{"a_min", s.a_min}, {"a_max", s.a_max}};
      j["lines"] = lines;
      j["pass"] = covered;
      exit_code = covered ? 0 : 1;
      if (!cfg.out_dir.empty()) {
        ordered_json sj = ordered_json::array();
        std::string tsv = "# t\ta\tabs_mu\targ_mu\n";
        for (const auto& line : strip.lines) {
          ordered_json lj;
          lj["a"] = line.a;
          ordered_json tt = ordered_json::array(), re = ordered_json::array(),
                       im = ordered_json::array(), mk = ordered_json::array();
          for (std::size_t k = 0; k < line.t.count; ++k) {
            tt.push_back(line.t.point(k));
            re.push_back(line.values[k].real());
            im.push_back(line.values[k].imag());
            mk.push_back(static_cast<int>(line.mask[k]));
            tsv += std::to_string(line.t.point(k)) + "\t" + std::to_string(line.a) + "\t" +
                   std::to_string(std::abs(line.values[k])) + "\t" +
                   std::to_string(std::arg(line.values[k])) + "\n";
          }
          lj["t"] = tt;
          lj["re"] = re;
          lj["im"] = im;
          lj["mask"] = mk;
          sj.push_back(lj);
        }
        write_text(cfg.out_dir, "symbol_strip.json", ordered_json{{"lines", sj}}.dump(1));
        write_text(cfg.out_dir, "symbol_strip.tsv", tsv);
      }
    } else {
      std::vector<cplx> samples;
      for (double a : chebyshev_lines(s.a_min, s.a_max, cfg.line_count))
        for (std::size_t k = 0; k < t.count; ++k) samples.push_back(cplx{t.point(k), a});
      SymbolBoundReport rep =
          verify_symbol_bound(kernel, w, samples, cfg.rel_slack, g, cfg.norm_window);
      j["strip"] = {{"a_min", s.a_min}, {"a_max", s.a_max}};
      j["bound"] = {{"strip_max", rep.strip_max},
                    {"arg_max", {rep.arg_max.real(), rep.arg_max.imag()}},
                    {"op_norm", rep.op_norm},
                    {"op_norm_doubled_window", rep.op_norm_doubled},
                    {"window", rep.window},
                    {"margin", rep.margin},
                    {"margin_doubled_window", rep.margin_doubled},
                    {"margin_non_worsening", rep.margin_non_worsening}};
      j["pass"] = rep.pass;
      exit_code = rep.pass ? 0 : 1;
    }
  } else {
    fail(errc::bad_config, "unknown multiplier subcommand '" + sub + "'");
  }
  return {j, exit_code};
}

// ---------------------------------------------------------------------------
// verify: every module invariant evaluated over the builtin matrix

struct CheckTable {
  ordered_json rows = ordered_json::array();
  bool all_pass = true;

  void add(const std::string& name, const std::string& scope, double measured, double threshold,
           const char* cmp, bool pass) {
    rows.push_back({{"check", name},
                    {"scope", scope},
                    {"measured", measured},
                    {"threshold", threshold},
                    {"comparison", cmp},
                    {"pass", pass}});
    all_pass = all_pass && pass;
  }
  void add_le(const std::string& name, const std::string& scope, double measured,
              double threshold) {
    add(name, scope, measured, threshold, "<=", measured <= threshold);
  }
  void add_ge(const std::string& name, const std::string& scope, double measured,
              double threshold) {
    add(name, scope, measured, threshold, ">=", measured >= threshold);
  }
};

CommandResult cmd_verify(const RunConfig& cfg) {
  if (cfg.verify_weights.empty()) fail(errc::bad_config, "no weights configured");
  ordered_json j = report_envelope("verify", "", cfg);
  CheckTable table;
  Grid g{std::min(cfg.grid_half_width, 64.0), cfg.grid_step};

  for (const auto& spec : cfg.verify_weights) {
    Weight w = weight_from_spec(spec);
    const std::string& id = w.id;
    try {
      table.add_le("ratio_sup_at_zero", id, std::abs(log_ratio_sup(w, 0.0, {-50.0, 50.0}, 0.01)),
                   0.0);
      {
        double worst = -1e300;
        for (auto [t, s] : {std::pair{1.0, 1.0}, {1.0, 2.5}, {-1.0, 2.0}}) {
          double v = log_ratio_sup(w, t + s, {-50.0, 50.0}, 0.01) -
                     log_ratio_sup(w, t, {-50.0, 50.0}, 0.01) -
                     log_ratio_sup(w, s, {-50.0, 50.0}, 0.01);
          worst = std::max(worst, v);
        }
        table.add_le("ratio_sup_submultiplicative", id, worst, 1e-9);
      }
      if (w.has_closed_form()) {
        double worst = 0.0;
        for (double t : {0.5, 1.0, 3.0})
          worst = std::max(worst, std::abs(log_ratio_sup(w, t, {-100.0, 100.0}, 1e-3) -
                                           w.closed_form_log_ratio_sup(t)));
        table.add_le("closed_form_matches_sampled_sup", id, worst, 1e-6);
      }
      {
        std::vector<double> t_grid;
        for (int t = -10; t <= 10; ++t) t_grid.push_back(t);
        table.add_le("growth_bound_violation", id, fit_h4(w, t_grid).max_violation, 1e-9);
      }
      {
        SpectralRadiusEstimate fwd = spectral_radius(w, ShiftDirection::forward, 64);
        SpectralRadiusEstimate bwd = spectral_radius(w, ShiftDirection::backward, 64);
        table.add_le("fekete_bound", id,
                     std::max(fwd.log_value - fwd.fekete_inf, bwd.log_value - bwd.fekete_inf),
                     1e-9);
        Strip s = make_strip(w, 64);
        Annulus a = annulus_from_strip(s);
        double consistency = std::max(std::abs(a.r_out - std::exp(s.a_max)),
                                      std::abs(a.r_in - std::exp(s.a_min)));
        table.add_le("annulus_strip_consistency", id, consistency, 0.0);
        table.add_le("strip_duality", id, s.a_min - s.a_max, 1e-9);
      }
      {
        SampledFunction f = make_bump(g, 0.0, 2.0);
        double n0 = weighted_norm(f, w);
        table.add_le("modulation_isometry", id,
                     std::abs(weighted_norm(modulate(f, 1.7), w) - n0), 1e-12 * n0);
        double bound = std::exp(log_ratio_sup(w, 2.0, {-g.half_width, g.half_width}, g.step));
        table.add_le("translate_norm_bound", id,
                     weighted_norm(translate_checked(f, 2.0), w) - bound * n0, 1e-9);
        SampledFunction round_trip = scale_exp(scale_exp(f, 0.25), -0.25);
        double diff = 0.0;
        for (std::size_t k = 0; k < f.values.size(); ++k)
          diff = std::max(diff, std::abs(round_trip.values[k] - f.values[k]));
        table.add_le("scale_exp_round_trip", id, diff, 1e-12);
        SampledFunction two_step = translate_checked(translate_checked(f, 1.5), -0.5);
        SampledFunction one_step = translate_checked(f, 1.0);
        double tdiff = 0.0;
        for (std::size_t k = 0; k < f.values.size(); ++k)
          tdiff = std::max(tdiff, std::abs(two_step.values[k] - one_step.values[k]));
        table.add_le("translate_composition_exact", id, tdiff, 0.0);
      }
    } catch (const Error& e) {
      table.add("module_error: " + std::string(e.what()), id, 1.0, 0.0, "<=", false);
    }
  }

  // global checks on the unweighted space and one genuine strip
  try {
    Weight unit = make_builtin_weight("constant");
    Weight vee = make_builtin_weight("exp_poly", {0.0});  // log w = |x|
    SampledFunction gauss = make_gaussian_truncated(g, 1.0);
    double gn = weighted_norm(gauss, unit);
    table.add_le("gaussian_norm_quadrature", "global",
                 std::abs(gn * gn - std::sqrt(std::numbers::pi)), 1e-6);

    Kernel tri = kernel_by_id(cfg, g, "triangle");
    Kernel box = kernel_by_id(cfg, g, "box");
    SampledFunction probe = make_bump(g, 0.0, 3.0);

    {  // convolution theorem across lines of the strip
      double worst = 0.0;
      for (double a : {-1.0, 0.0, 1.0}) {
        FreqGrid t = FreqGrid::linspace(-8.0, 8.0, 9);
        auto lhs = weighted_ft(apply_convolution(tri, probe), a, t);
        auto rhs = weighted_ft(probe, a, t);
        for (std::size_t k = 0; k < t.count; ++k) {
          cplx sym = kernel_symbol(tri.phi, cplx{t.point(k), a});
          worst = std::max(worst, std::abs(lhs[k] - sym * rhs[k]) / (1.0 + std::abs(lhs[k])));
        }
      }
      table.add_le("convolution_theorem", "global", worst, 1e-8);
    }
    {  // direct and fast convolution paths agree
      SampledFunction d = apply_convolution(tri, probe, ConvPath::direct);
      SampledFunction f2 = apply_convolution(tri, probe, ConvPath::fast);
      double worst = 0.0;
      for (std::size_t k = 0; k < d.values.size(); ++k)
        worst = std::max(worst, std::abs(d.values[k] - f2.values[k]));
      table.add_le("convolution_paths_agree", "global", worst, 1e-10);
    }
    {  // kernel algebra matches operator composition
      Multiplier mt = Multiplier::convolution(tri), mb = Multiplier::convolution(box);
      SampledFunction via_ops = mt.apply(mb.apply(probe));
      SampledFunction via_kernel = apply_convolution(convolve_kernels(tri, box), probe);
      double worst = 0.0, scale = weighted_norm(probe, unit);
      for (std::size_t k = 0; k < via_ops.values.size(); ++k)
        worst = std::max(worst, std::abs(via_ops.values[k] - via_kernel.values[k]));
      table.add_le("kernel_algebra_multiplicative", "global", worst / scale, 1e-9);
    }
    {  // commutation for the shipped kinds, failure of the diagnostic
      auto probes = standard_probes(g);
      Annulus ann_unit = make_annulus(unit, 32);
      std::vector<Multiplier> kinds = {
          Multiplier::convolution(tri),
          Multiplier::resolvent(unit, cplx{std::log(2.0), 0.0}, cfg.tail_tol, &ann_unit),
          Multiplier::composition({Multiplier::convolution(tri), Multiplier::convolution(box)}),
      };
      double worst = 0.0;
      for (const auto& m : kinds)
        for (double t : {1.0, -1.0, 2.0, -2.0, 5.0, -5.0})
          worst = std::max(worst, commutation_residual(m, t, probes, unit));
      table.add_le("commutation_shipped_kinds", "global", worst, 1e-10);
      table.add_ge("commutation_non_multiplier", "global",
                   commutation_residual(Multiplier::coordinate_diagnostic(), 1.0, probes, unit),
                   1e-2);
    }
    {  // finite-section norm is nondecreasing in the window
      Grid gn2{128.0, cfg.grid_step};
      Multiplier mt = Multiplier::convolution(kernel_by_id(cfg, gn2, "triangle"));
      double n32 = operator_norm(mt, unit, gn2, 1e-11, 32.0).value;
      double n64 = operator_norm(mt, unit, gn2, 1e-11, 64.0).value;
      double n96 = operator_norm(mt, unit, gn2, 1e-11, 96.0).value;
      table.add_le("norm_window_monotone", "global",
                   std::max(n32 - n64, n64 - n96), 1e-9);
      table.add_le("norm_identity_kernel", "global",
                   std::abs(operator_norm(Multiplier::convolution(kernel_by_id(cfg, gn2, "delta")),
                                          unit, gn2, 1e-11, 64.0)
                                .value -
                            1.0),
                   1e-6);
    }
    {  // symbol extraction: probe independence, oracle match, boundedness
      FreqGrid t = FreqGrid::linspace(cfg.t_lo, cfg.t_hi, 512);
      Multiplier mt = Multiplier::convolution(tri);
      SymbolLine line = extract_symbol(mt, 0.0, symbol_probes(g), t, cfg.floor_rel);
      table.add_ge("symbol_mask_coverage", "global", line.mask_coverage, 0.9);
      table.add_le("symbol_probe_spread", "global", line.max_spread, 1e-6 * 2.0);
      double worst = 0.0;
      for (std::size_t k = 0; k < t.count; ++k) {
        if (!line.mask[k]) continue;
        cplx sym = kernel_symbol(tri.phi, cplx{t.point(k), 0.0});
        worst = std::max(worst, std::abs(line.values[k] - sym) / (1.0 + std::abs(sym)));
      }
      table.add_le("symbol_matches_kernel_transform", "global", worst, 1e-6);
      Grid gn2{128.0, cfg.grid_step};
      double norm = operator_norm(Multiplier::convolution(kernel_by_id(cfg, gn2, "triangle")),
                                  unit, gn2, 1e-11, 96.0)
                        .value;
      table.add_le("symbol_bounded_by_norm", "global", line.sup_abs_on_mask(),
                   norm * (1.0 + 1e-2));
      // multiplicativity of extracted lines under composition
      Multiplier comp = Multiplier::composition({mt, Multiplier::convolution(box)});
      SymbolLine lc = extract_symbol(comp, 0.0, symbol_probes(g), t, cfg.floor_rel);
      SymbolLine lb = extract_symbol(Multiplier::convolution(box), 0.0, symbol_probes(g), t,
                                     cfg.floor_rel);
      double wm = 0.0;
      for (std::size_t k = 0; k < t.count; ++k) {
        if (!(line.mask[k] && lb.mask[k] && lc.mask[k])) continue;
        wm = std::max(wm, std::abs(lc.values[k] - line.values[k] * lb.values[k]) /
                              (1.0 + std::abs(lc.values[k])));
      }
      table.add_le("symbol_multiplicative_composition", "global", wm, 1e-6);
    }
    {  // Fourier convention: the kernel transform is the a = 0 weighted transform
      double worst = 0.0;
      for (double t : {0.0, 1.3, -7.7})
        worst = std::max(worst, std::abs(kernel_symbol(tri.phi, cplx{t, 0.0}) -
                                         weighted_ft_point(tri.phi, 0.0, t)));
      table.add_le("fourier_convention_self_consistency", "global", worst, 0.0);
    }
    {  // resolvent identity, both branches
      Weight el = make_builtin_weight("exp_linear");
      Annulus ann_unit = make_annulus(unit, 32), ann_el = make_annulus(el, 32);
      SampledFunction f = make_bump(g, 0.0, 2.0);
      auto identity_residual = [&](const Weight& ww, cplx alpha, const Annulus& ann) {
        SampledFunction tf = resolvent_neumann(ww, alpha, f, cfg.tail_tol, &ann);
        SampledFunction stf = translate_checked(tf, 1.0);
        SampledFunction resid(g);
        cplx ea = std::exp(alpha);
        for (std::size_t k = 0; k < resid.values.size(); ++k)
          resid.values[k] = stf.values[k] - ea * tf.values[k] - f.values[k];
        resid.shrink_support_to_nonzero();
        return weighted_norm(resid, ww);
      };
      table.add_le("resolvent_identity_outer", "global",
                   identity_residual(unit, cplx{std::log(2.0), 0.0}, ann_unit),
                   10.0 * cfg.tail_tol);
      table.add_le("resolvent_identity_inner", "global",
                   identity_residual(el, cplx{0.0, 0.0}, ann_el), 10.0 * cfg.tail_tol);
      // extracted resolvent symbol against the closed pole form
      Annulus ann_u = make_annulus(unit, 32);
      Multiplier res = Multiplier::resolvent(unit, cplx{std::log(2.0), 0.0}, cfg.tail_tol, &ann_u);
      FreqGrid t = FreqGrid::linspace(-6.0, 6.0, 241);
      SymbolLine lr = extract_symbol(res, 0.0, symbol_probes(g), t, cfg.floor_rel);
      double worst = 0.0;
      for (std::size_t k = 0; k < t.count; ++k) {
        if (!lr.mask[k]) continue;
        cplx expected = resolvent_symbol(cplx{std::log(2.0), 0.0}, cplx{t.point(k), 0.0});
        worst = std::max(worst, std::abs(lr.values[k] - expected));
      }
      table.add_le("resolvent_symbol_agreement", "global", worst, 10.0 * cfg.tail_tol);
    }
    {  // mollifier demonstration at the scale this grid resolves
      Kernel psi = tri;
      double mass_psi = 0.0;
      for (const auto& v : psi.phi.values) mass_psi += v.real();
      std::vector<double> strong;
      double ratio_worst = 0.0, mass_worst = 0.0;
      Grid gn2{128.0, cfg.grid_step};
      Kernel psi2 = kernel_by_id(cfg, gn2, "triangle");
      Multiplier mpsi = Multiplier::convolution(psi2);
      double psi_norm = operator_norm(mpsi, unit, gn2, 1e-10, 48.0).value;
      SampledFunction f = make_bump(gn2, 0.0, 3.0);
      double fn = weighted_norm(f, unit);
      SampledFunction mf = mpsi.apply(f);
      for (int n : {4, 8, 16}) {
        Kernel phi_n = mollifier_sequence(psi2, n);
        double mass_n = 0.0;
        for (const auto& v : phi_n.phi.values) mass_n += v.real();
        mass_worst = std::max(mass_worst, std::abs(mass_n - mass_psi) * gn2.step);
        SampledFunction diff = Multiplier::convolution(phi_n).apply(f);
        for (std::size_t k = 0; k < diff.values.size(); ++k) diff.values[k] -= mf.values[k];
        diff.shrink_support_to_nonzero();
        strong.push_back(weighted_norm(diff, unit) / fn);
        ratio_worst = std::max(
            ratio_worst,
            operator_norm(Multiplier::convolution(phi_n), unit, gn2, 1e-10, 48.0).value /
                psi_norm);
      }
      table.add_le("mollifier_mass_preserved", "global", mass_worst, 1e-9);
      bool monotone = strong[0] > strong[1] && strong[1] > strong[2];
      table.add("mollifier_strong_convergence", "global", strong.back(), strong.front(), "<",
                monotone);
      table.add_le("mollifier_norm_ratio", "global", ratio_worst, 2.0);
    }
    {  // residual law and rotation invariance on the unweighted space
      Grid gw{160.0, cfg.grid_step};
      Strip s_unit{0.0, 0.0, 0.0, 0.0, false};
      double worst_law = 0.0;
      for (double L0 : {64.0, 100.0, 144.0}) {
        double r = weyl_residual(unit, cplx{std::cos(0.4), std::sin(0.4)}, L0, 0.0, gw, s_unit);
        worst_law = std::max(worst_law, std::abs(r * std::sqrt(L0) - 1.0));
      }
      table.add_le("weyl_residual_law", "global", worst_law, 0.02);
      double r0 = weyl_residual(unit, cplx{1.0, 0.0}, 100.0, 0.0, gw, s_unit);
      double worst_rot = 0.0;
      for (double b : {0.3, 1.9, 4.4})
        worst_rot = std::max(
            worst_rot,
            std::abs(weyl_residual(unit, std::exp(cplx{0.0, b}), 100.0, 0.0, gw, s_unit) - r0));
      table.add_le("weyl_rotation_invariance", "global", worst_rot, 1e-6);
    }
    {  // two-sided map consistency on a reduced raster
      Grid gm{1344.0, cfg.grid_step};
      for (const char* name : {"constant", "exp_linear"}) {
        Weight wm = make_builtin_weight(name);
        Annulus ann = make_annulus(wm, 64);
        PolarRaster raster{0.5 * ann.r_in, 1.5 * ann.r_out, 13, 4};
        RunConfig c2 = cfg;
        c2.grid_half_width = gm.half_width;
        SpectrumMapResult map =
            spectrum_map(wm, raster, gm, default_weyl_windows(c2), cfg.weyl_taper, cfg.tail_tol);
        table.add("map_contradiction_free", name, map.contradiction_free ? 0.0 : 1.0, 0.0, "<=",
                  map.contradiction_free);
        double cell = (raster.r_max - raster.r_min) / (raster.n_radii - 1);
        bool band_ok = map.n_inside > 0 &&
                       map.inside_band_lo >= ann.r_in - cell - 1e-9 &&
                       map.inside_band_hi <= ann.r_out + cell + 1e-9;
        table.add("map_band_within_annulus", name, band_ok ? 0.0 : 1.0, 0.0, "<=", band_ok);
      }
    }
    {  // finite-section pollution exhibits
      table.add_le("pseudo_truncation_singular_at_zero", "global",
                   finite_section_smin(unit, 512, 0.0), 1e-12);
      table.add_ge("pseudo_outside_disk_resolvable", "global",
                   finite_section_smin(unit, 512, 1.5), 0.45);
      double s128 = finite_section_smin(unit, 128, 0.9);
      double s512 = finite_section_smin(unit, 512, 0.9);
      table.add("pseudo_smin_decreasing_in_n", "global", s512, s128, "<", s512 < s128);
    }
    {  // config round-trip
      RunConfig rt = config_from_json(config_to_json(cfg));
      bool same = config_to_json(rt).dump() == config_to_json(cfg).dump();
      table.add("config_round_trip", "global", same ? 0.0 : 1.0, 0.0, "<=", same);
    }
  } catch (const Error& e) {
    table.add("module_error: " + std::string(e.what()), "global", 1.0, 0.0, "<=", false);
  }

  j["checks"] = table.rows;
  j["check_count"] = static_cast<int>(table.rows.size());
  j["pass"] = table.all_pass;
  return {j, table.all_pass ? 0 : 1};
}

}  // namespace

const std::vector<std::string>& builtin_kernel_ids() {
  static const std::vector<std::string> ids = {"delta", "box",       "triangle",
                                               "bump",  "bump_wide", "gauss"};
  return ids;
}

Kernel kernel_by_id(const RunConfig& cfg, const Grid& g, const std::string& id) {
  if (auto it = cfg.compositions.find(id); it != cfg.compositions.end()) {
    if (it->second.empty()) fail(errc::bad_config, "composition '" + id + "' lists no kernels");
    Kernel acc = kernel_by_id(cfg, g, it->second.front());
    for (std::size_t i = 1; i < it->second.size(); ++i)
      acc = convolve_kernels(acc, kernel_by_id(cfg, g, it->second[i]));
    return acc;
  }
  if (id == "delta") return Kernel(make_delta(g, 0.0));
  if (id == "box") return Kernel(make_indicator(g, 0.0, 1.0));
  if (id == "triangle") {
    SampledFunction f(g);
    f.support = Interval{-1.0, 1.0};
    for (std::size_t j = f.support_begin(); j < f.support_end(); ++j) {
      double x = g.point(j);
      if (std::abs(x) <= 1.0) f.values[j] = 1.0 - std::abs(x);
    }
    return Kernel(std::move(f));
  }
  if (id == "bump") return Kernel(make_bump(g, 0.0, 2.0));
  if (id == "bump_wide") return Kernel(make_bump(g, 0.0, 4.0));
  if (id == "gauss") return Kernel(make_gaussian_truncated(g, 0.5));
  if (id.find(".csv") != std::string::npos) return Kernel(load_function_csv(id));
  fail(errc::bad_config, "unknown kernel id '" + id + "'");
}

CommandResult run_command(const std::string& command, const std::string& subcommand,
                          const RunConfig& cfg) {
  CommandResult result;
  if (command == "weight") result = cmd_weight(cfg);
  else if (command == "spectrum") result = cmd_spectrum(cfg, subcommand);
  else if (command == "multiplier") result = cmd_multiplier(cfg, subcommand);
  else if (command == "verify") result = cmd_verify(cfg);
  else fail(errc::bad_config, "unknown command '" + command + "'");
  if (!cfg.out_dir.empty()) write_text(cfg.out_dir, "report.json", result.report.dump(1) + "\n");
  return result;
}

}  // namespace ak
