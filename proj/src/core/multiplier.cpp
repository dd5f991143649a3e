// SPDX-License-Identifier: Apache-2.0
#include "multiplier.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fourier.hpp"

namespace ak {
namespace {

struct SupportWindow {
  std::size_t lo = 0, hi = 0;  // [lo, hi)
};

SupportWindow nonzero_window(const SampledFunction& f) {
  SupportWindow w{f.support_begin(), f.support_end()};
  while (w.lo < w.hi && f.values[w.lo] == cplx{0.0, 0.0}) ++w.lo;
  while (w.hi > w.lo && f.values[w.hi - 1] == cplx{0.0, 0.0}) --w.hi;
  return w;
}

SampledFunction subtract(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.grid == b.grid)) fail(errc::invalid_arg, "sampled functions live on different grids");
  SampledFunction out = a;
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] -= b.values[j];
  if (a.support && b.support)
    out.support = Interval{std::min(a.support->lo, b.support->lo),
                           std::max(a.support->hi, b.support->hi)};
  else
    out.support.reset();
  return out;
}

}  // namespace

Kernel::Kernel(SampledFunction f) : phi(std::move(f)) {
  if (!phi.support) phi.shrink_support_to_nonzero();
  if (phi.support->length() >= 2.0 * phi.grid.half_width - phi.grid.step)
    fail(errc::invalid_arg, "kernel: support must be a proper sub-interval of the grid");
}

SampledFunction apply_convolution(const Kernel& k, const SampledFunction& f, ConvPath path) {
  const Grid& g = f.grid;
  if (!(g == k.phi.grid)) fail(errc::invalid_arg, "kernel and function grids differ");
  SupportWindow kw = nonzero_window(k.phi);
  SupportWindow fw = nonzero_window(f);
  SampledFunction out(g);
  out.support = Interval{0.0, 0.0};
  if (kw.lo >= kw.hi || fw.lo >= fw.hi) return out;

  const std::size_t nk = kw.hi - kw.lo, nf = fw.hi - fw.lo;
  std::vector<cplx> conv;
  bool use_direct = path == ConvPath::direct || (path == ConvPath::automatic && nk < 64);
  if (use_direct) {
    conv.assign(nk + nf - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < nk; ++i) {
      const cplx c = k.phi.values[kw.lo + i];
      if (c == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < nf; ++j) conv[i + j] += c * f.values[fw.lo + j];
    }
  } else {
    std::vector<cplx> a(k.phi.values.begin() + kw.lo, k.phi.values.begin() + kw.hi);
    std::vector<cplx> b(f.values.begin() + fw.lo, f.values.begin() + fw.hi);
    conv = linear_convolution_fft(a, b);
  }

  // result sample s sits at index kw.lo + fw.lo + s - z0
  const auto z0 = static_cast<std::int64_t>(g.zero_index());
  const auto base = static_cast<std::int64_t>(kw.lo + fw.lo) - z0;
  const auto n = static_cast<std::int64_t>(g.size());
  double kept = 0.0, dropped = 0.0;
  for (std::size_t s = 0; s < conv.size(); ++s) {
    const cplx v = g.step * conv[s];
    const std::int64_t idx = base + static_cast<std::int64_t>(s);
    double m = std::norm(v);
    if (idx < 0 || idx >= n) {
      dropped += m;
    } else {
      out.values[idx] = v;
      kept += m;
    }
  }
  if (dropped > 0.0 && std::sqrt(dropped) > 1e-12 * std::sqrt(kept + dropped))
    fail(errc::truncation, "convolution support exceeds the grid: dropped mass above tolerance");

  double lo = std::max(k.phi.support->lo + f.support->lo, -g.half_width);
  double hi = std::min(k.phi.support->hi + f.support->hi, g.half_width);
  out.support = Interval{lo, std::max(lo, hi)};
  return out;
}

Kernel convolve_kernels(const Kernel& a, const Kernel& b) {
  return Kernel(apply_convolution(a, b.phi));
}

Kernel mollifier_sequence(const Kernel& psi, int n) {
  if (n < 1) fail(errc::invalid_arg, "mollifier: n must be >= 1");
  const Grid& g = psi.phi.grid;
  const double width = 1.0 / static_cast<double>(n);
  if (width < g.step)
    fail(errc::mollifier_unresolved,
         "mollifier unresolved: width 1/n falls below the grid step");
  SampledFunction j_n = make_bump(g, 0.0, width);
  double mass = 0.0;
  for (const cplx& v : j_n.values) mass += v.real();
  mass *= g.step;
  if (!(mass > 0.0)) fail(errc::internal, "mollifier bump has no mass on this grid");
  for (cplx& v : j_n.values) v /= mass;
  return convolve_kernels(psi, Kernel(std::move(j_n)));
}

// ---------------------------------------------------------------------------
// Multiplier implementations

struct Multiplier::Impl {
  virtual ~Impl() = default;
  virtual Kind kind() const = 0;
  virtual SampledFunction apply(const SampledFunction& f) const = 0;
  virtual double support_growth() const = 0;
  virtual void conj_apply(const std::vector<cplx>& in, std::vector<cplx>& out,
                          const ConjContext& ctx, bool adjoint) const = 0;
};

namespace {

// shifted accumulation out_k += coeff * exp(lambda_k - lambda_{k-off}) * in_{k-off}
void add_shifted_conjugated(const std::vector<cplx>& in, std::vector<cplx>& out,
                            const std::vector<double>& lambda, std::int64_t off, cplx coeff) {
  const auto n = static_cast<std::int64_t>(in.size());
  const std::int64_t lo = std::max<std::int64_t>(0, off);
  const std::int64_t hi = std::min(n, n + off);
  for (std::int64_t k = lo; k < hi; ++k) {
    const cplx v = in[k - off];
    if (v == cplx{0.0, 0.0}) continue;
    out[k] += coeff * std::exp(lambda[k] - lambda[k - off]) * v;
  }
}

class ConvImpl final : public Multiplier::Impl {
public:
  explicit ConvImpl(Kernel k) : kernel_(std::move(k)) {
    SupportWindow kw = nonzero_window(kernel_.phi);
    const auto z0 = static_cast<std::int64_t>(kernel_.phi.grid.zero_index());
    for (std::size_t j = kw.lo; j < kw.hi; ++j) {
      const cplx v = kernel_.phi.values[j];
      if (v == cplx{0.0, 0.0}) continue;
      offsets_.push_back(static_cast<std::int64_t>(j) - z0);
      coeffs_.push_back(kernel_.phi.grid.step * v);
    }
  }

  Multiplier::Kind kind() const override { return Multiplier::Kind::convolution; }
  SampledFunction apply(const SampledFunction& f) const override {
    return apply_convolution(kernel_, f);
  }
  double support_growth() const override {
    return std::max(std::abs(kernel_.phi.support->lo), std::abs(kernel_.phi.support->hi));
  }
  void conj_apply(const std::vector<cplx>& in, std::vector<cplx>& out, const Multiplier::ConjContext& ctx,
                  bool adjoint) const override {
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
      if (!adjoint)
        add_shifted_conjugated(in, out, ctx.lambda, offsets_[i], coeffs_[i]);
      else
        add_shifted_conjugated(in, out, ctx.lambda, -offsets_[i], std::conj(coeffs_[i]));
    }
  }

  const Kernel& kernel() const { return kernel_; }

private:
  Kernel kernel_;
  std::vector<std::int64_t> offsets_;
  std::vector<cplx> coeffs_;
};

class ResolventImpl final : public Multiplier::Impl {
public:
  ResolventImpl(const Weight& w, cplx alpha, double tail_tol, const Annulus* hint) {
    if (!(tail_tol > 0.0)) fail(errc::invalid_arg, "resolvent: tail_tol must be positive");
    Annulus ann = hint ? *hint : make_annulus(w);
    const double ra = alpha.real();  // log |e^alpha|
    const double margin_out = 3.0 * ann.u_out + 1e-9;
    const double margin_in = 3.0 * ann.u_in + 1e-9;
    const double log_r_out = std::log(ann.r_out), log_r_in = std::log(ann.r_in);
    if (ra > log_r_out + margin_out) outer_ = true;
    else if (ra < log_r_in - margin_in) outer_ = false;
    else
      fail(errc::inside_spectrum,
           "inside spectrum: |e^alpha| lies in the spectral annulus of the shift, "
           "the resolvent series diverges");
    // fixed truncation: |coeff_n| ||S_{+-n}|| below tail_tol with headroom,
    // so the operator is an exact finite combination of shifts
    const double decay = outer_ ? (log_r_out - ra) : (ra - log_r_in);  // < 0 per branch
    int terms = 1;
    for (int n = 1; n < 100000; ++n) {
      double log_term = static_cast<double>(n + 1) * decay;
      if (log_term < std::log(tail_tol * 1e-3)) {
        terms = n + 1;
        break;
      }
    }
    cplx e_ma = std::exp(-alpha), e_pa = std::exp(alpha);
    cplx c = outer_ ? -e_ma : cplx{1.0, 0.0};
    for (int n = 0; n < terms; ++n) {
      if (outer_) {
        coeffs_.push_back(c);       // -e^{-alpha(n+1)} S_n
        shifts_.push_back(n);
        c *= e_ma;
      } else {
        coeffs_.push_back(c);       // e^{alpha n} S_{-(n+1)}
        shifts_.push_back(-(n + 1));
        c *= e_pa;
      }
    }
  }

  Multiplier::Kind kind() const override { return Multiplier::Kind::resolvent; }
  SampledFunction apply(const SampledFunction& f) const override {
    SampledFunction acc(f.grid);
    acc.support = f.support;
    SampledFunction term = f;
    int prev_shift = 0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      term = translate_checked(term, static_cast<double>(shifts_[i] - prev_shift));
      prev_shift = shifts_[i];
      for (std::size_t j = term.support_begin(); j < term.support_end(); ++j)
        acc.values[j] += coeffs_[i] * term.values[j];
      if (acc.support && term.support)
        acc.support = Interval{std::min(acc.support->lo, term.support->lo),
                               std::max(acc.support->hi, term.support->hi)};
    }
    return acc;
  }
  double support_growth() const override {
    double g = 0.0;
    for (int s : shifts_) g = std::max(g, std::abs(static_cast<double>(s)));
    return g;
  }
  void conj_apply(const std::vector<cplx>& in, std::vector<cplx>& out, const Multiplier::ConjContext& ctx,
                  bool adjoint) const override {
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
    const auto steps = static_cast<std::int64_t>(std::llround(1.0 / ctx.grid->step));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      std::int64_t off = shifts_[i] * steps;
      if (!adjoint)
        add_shifted_conjugated(in, out, ctx.lambda, off, coeffs_[i]);
      else
        add_shifted_conjugated(in, out, ctx.lambda, -off, std::conj(coeffs_[i]));
    }
  }

private:
  bool outer_ = true;
  std::vector<cplx> coeffs_;
  std::vector<int> shifts_;
};

class CompositionImpl final : public Multiplier::Impl {
public:
  explicit CompositionImpl(std::vector<Multiplier> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) fail(errc::invalid_arg, "composition: empty part list");
  }
  Multiplier::Kind kind() const override { return Multiplier::Kind::composition; }
  SampledFunction apply(const SampledFunction& f) const override {
    SampledFunction g = f;
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) g = it->apply(g);
    return g;
  }
  double support_growth() const override {
    double g = 0.0;
    for (const auto& p : parts_) g += p.support_growth();
    return g;
  }
  void conj_apply(const std::vector<cplx>& in, std::vector<cplx>& out, const Multiplier::ConjContext& ctx,
                  bool adjoint) const override {
    std::vector<cplx> cur = in, next(in.size());
    if (!adjoint) {
      for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
        it->conj_apply(cur, next, ctx, false);
        std::swap(cur, next);
      }
    } else {
      for (const auto& p : parts_) {
        p.conj_apply(cur, next, ctx, true);
        std::swap(cur, next);
      }
    }
    out = std::move(cur);
  }

private:
  std::vector<Multiplier> parts_;
};

class DiagnosticImpl final : public Multiplier::Impl {
public:
  Multiplier::Kind kind() const override { return Multiplier::Kind::coordinate_diagnostic; }
  SampledFunction apply(const SampledFunction& f) const override {
    SampledFunction g = f;
    for (std::size_t j = g.support_begin(); j < g.support_end(); ++j)
      g.values[j] *= f.grid.point(j);
    return g;
  }
  double support_growth() const override { return 0.0; }
  void conj_apply(const std::vector<cplx>& in, std::vector<cplx>& out, const Multiplier::ConjContext& ctx,
                  bool) const override {
    out.resize(in.size());
    for (std::size_t j = 0; j < in.size(); ++j) out[j] = ctx.grid->point(j) * in[j];
  }
};

}  // namespace

Multiplier Multiplier::convolution(Kernel k) {
  return Multiplier(std::make_shared<ConvImpl>(std::move(k)));
}
Multiplier Multiplier::resolvent(const Weight& w, cplx alpha, double tail_tol,
                                 const Annulus* hint) {
  return Multiplier(std::make_shared<ResolventImpl>(w, alpha, tail_tol, hint));
}
Multiplier Multiplier::composition(std::vector<Multiplier> parts) {
  return Multiplier(std::make_shared<CompositionImpl>(std::move(parts)));
}
Multiplier Multiplier::coordinate_diagnostic() {
  return Multiplier(std::make_shared<DiagnosticImpl>());
}

Multiplier::Kind Multiplier::kind() const { return impl_->kind(); }
SampledFunction Multiplier::apply(const SampledFunction& f) const { return impl_->apply(f); }
double Multiplier::support_growth() const { return impl_->support_growth(); }
void Multiplier::conj_apply(const std::vector<cplx>& in, std::vector<cplx>& out,
                            const ConjContext& ctx, bool adjoint) const {
  impl_->conj_apply(in, out, ctx, adjoint);
}

// ---------------------------------------------------------------------------

SampledFunction resolvent_neumann(const Weight& w, cplx alpha, const SampledFunction& f,
                                  double tail_tol, const Annulus* annulus_hint) {
  if (!(tail_tol > 0.0)) fail(errc::invalid_arg, "resolvent: tail_tol must be positive");
  Annulus ann = annulus_hint ? *annulus_hint : make_annulus(w);
  const double ra = alpha.real();
  bool outer;
  if (ra > std::log(ann.r_out) + 3.0 * ann.u_out + 1e-9) outer = true;
  else if (ra < std::log(ann.r_in) - 3.0 * ann.u_in - 1e-9) outer = false;
  else
    fail(errc::inside_spectrum,
         "inside spectrum: |e^alpha| lies in the spectral annulus of the shift, "
         "the resolvent series diverges");

  SampledFunction acc(f.grid);
  acc.support = f.support;
  SampledFunction term = f;
  cplx step_coeff = outer ? std::exp(-alpha) : std::exp(alpha);
  double shift = outer ? 1.0 : -1.0;
  cplx coeff = outer ? -std::exp(-alpha) : cplx{1.0, 0.0};
  if (!outer) term = translate_checked(term, -1.0);
  for (int n = 0; n < 100000; ++n) {
    double term_norm = std::abs(coeff) * weighted_norm(term, w);
    if (term_norm < tail_tol) break;
    for (std::size_t j = term.support_begin(); j < term.support_end(); ++j)
      acc.values[j] += coeff * term.values[j];
    if (acc.support && term.support)
      acc.support = Interval{std::min(acc.support->lo, term.support->lo),
                             std::max(acc.support->hi, term.support->hi)};
    term = translate_checked(term, shift);
    coeff *= step_coeff;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Operator norm on the window subspace. The action is conjugated by the
// quadrature-weight diagonal so every exponent appears only as a bounded
// local ratio; a Lanczos iteration with full reorthogonalization then drives
// the Rayleigh quotient of M*M to the top of the finite section.
NormEstimate operator_norm(const Multiplier& m, const Weight& w, const Grid& grid,
                           double rel_tol, double window_half_width, int max_iterations) {
  if (!(rel_tol > 0.0)) fail(errc::invalid_arg, "operator_norm: rel_tol must be positive");
  const std::size_t n = grid.size();
  const double growth = m.support_growth();
  const double w_max = grid.half_width - 2.0 * growth - 1.0;
  if (!(w_max > 1.0)) fail(errc::invalid_arg, "operator_norm: grid too small for this operator");
  const double W = std::min(window_half_width, w_max);

  Multiplier::ConjContext ctx;
  ctx.grid = &grid;
  ctx.lambda.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double tau = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    ctx.lambda[j] = w.log_w(grid.point(j)) + 0.5 * std::log(tau);
  }

  const std::size_t w_lo = grid.index_near(-W), w_hi = grid.index_near(W) + 1;
  auto project = [&](std::vector<cplx>& v) {
    std::fill(v.begin(), v.begin() + w_lo, cplx{0.0, 0.0});
    std::fill(v.begin() + w_hi, v.end(), cplx{0.0, 0.0});
  };
  std::vector<cplx> tmp(n), tmp2(n);
  auto op = [&](const std::vector<cplx>& v, std::vector<cplx>& out) {
    m.conj_apply(v, tmp, ctx, false);
    m.conj_apply(tmp, out, ctx, true);
    project(out);
  };

  auto dot = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s{0.0, 0.0};
    for (std::size_t j = w_lo; j < w_hi; ++j) s += std::conj(a[j]) * b[j];
    return s;
  };

  // fixed-seed start vector (Box-Muller over the window)
  std::vector<cplx> q(n, cplx{0.0, 0.0});
  std::mt19937_64 rng(0x414B5345ULL);
  auto uniform = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  for (std::size_t j = w_lo; j < w_hi; ++j) {
    double r = std::sqrt(-2.0 * std::log(uniform()));
    double th = 2.0 * std::numbers::pi * uniform();
    q[j] = cplx{r * std::cos(th), r * std::sin(th)};
  }
  double q_norm = std::sqrt(dot(q, q).real());
  for (std::size_t j = w_lo; j < w_hi; ++j) q[j] /= q_norm;

  std::vector<std::vector<cplx>> basis{q};
  std::vector<double> alpha, beta;
  NormEstimate est;
  est.window_half_width = W;
  double lam = 0.0, lam_old = 0.0;
  for (int k = 0; k < max_iterations; ++k) {
    op(basis.back(), tmp2);
    double a = dot(tmp2, basis.back()).real();
    alpha.push_back(a);
    for (std::size_t j = w_lo; j < w_hi; ++j) {
      tmp2[j] -= a * basis.back()[j];
      if (k > 0) tmp2[j] -= beta[k - 1] * basis[k - 1][j];
    }
    for (const auto& b : basis) {  // full reorthogonalization
      cplx c = dot(b, tmp2);
      for (std::size_t j = w_lo; j < w_hi; ++j) tmp2[j] -= c * b[j];
    }

    std::vector<double> d = alpha, e = beta;
    e.resize(d.size(), 0.0);
    int info = LAPACKE_dsterf(static_cast<int>(d.size()), d.data(), e.data());
    if (info != 0) fail(errc::internal, "tridiagonal eigenvalue solve failed");
    lam = d.back();

    est.iterations = k + 1;
    est.relative_tol = std::abs(lam - lam_old) / std::max(lam, 1e-300);
    if (k > 3 && est.relative_tol < rel_tol) {
      est.converged = true;
      break;
    }
    lam_old = lam;
    double b = std::sqrt(std::max(0.0, dot(tmp2, tmp2).real()));
    if (b < 1e-14) {
      est.converged = true;  // invariant subspace exhausted
      break;
    }
    beta.push_back(b);
    for (std::size_t j = w_lo; j < w_hi; ++j) tmp2[j] /= b;
    basis.push_back(tmp2);
  }
  est.value = std::sqrt(std::max(0.0, lam));
  return est;
}

double commutation_residual(const Multiplier& m, double t,
                            const std::vector<SampledFunction>& probes, const Weight& w) {
  if (probes.empty()) fail(errc::invalid_arg, "commutation: empty probe set");
  double worst = 0.0;
  for (const auto& f : probes) {
    double f_norm = weighted_norm(f, w);
    if (!(f_norm > 0.0)) fail(errc::invalid_arg, "commutation: zero probe");
    SampledFunction lhs = m.apply(translate_checked(f, t));
    SampledFunction rhs = translate_checked(m.apply(f), t);
    worst = std::max(worst, weighted_norm(subtract(lhs, rhs), w) / f_norm);
  }
  return worst;
}

std::vector<SampledFunction> standard_probes(const Grid& g) {
  return {
      make_bump(g, 0.0, 4.0),
      make_bump(g, 1.5, 2.5),
      make_gaussian_truncated(g, 1.0),
  };
}

}  // namespace ak
