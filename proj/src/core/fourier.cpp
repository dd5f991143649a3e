// SPDX-License-Identifier: Apache-2.0
#include "fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

namespace ak {
namespace {

constexpr double kExpArgLimit = 700.0;

// FFTW plan creation is not thread-safe; executions on distinct buffers are.
class FftEngine {
public:
  static FftEngine& instance() {
    static FftEngine engine;
    return engine;
  }

  void transform(std::vector<cplx>& data, int sign) {
    fftw_plan plan = plan_for(data.size(), sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
  }

private:
  fftw_plan plan_for(std::size_t n, int sign) {
    std::scoped_lock lock(mu_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> probe(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n),
                                      reinterpret_cast<fftw_complex*>(probe.data()),
                                      reinterpret_cast<fftw_complex*>(probe.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// weighted samples g_j = tau_j f_j e^{a x_j} restricted to the support window
struct WindowedSamples {
  std::vector<cplx> g;
  double x0 = 0.0;  // abscissa of g[0]
  double h = 0.0;
};

WindowedSamples weighted_samples(const SampledFunction& f, double a) {
  const std::size_t n = f.values.size();
  std::size_t lo = f.support_begin(), hi = f.support_end();
  double reach = std::max(std::abs(f.grid.point(lo)), std::abs(f.grid.point(hi ? hi - 1 : 0)));
  if (std::abs(a) * reach > kExpArgLimit)
    fail(errc::scaling_overflow,
         "scaling overflow: e^{a x} not representable over the support; shrink a or the support");
  WindowedSamples w;
  w.h = f.grid.step;
  w.x0 = f.grid.point(lo);
  w.g.resize(hi > lo ? hi - lo : 0);
  for (std::size_t j = lo; j < hi; ++j) {
    const cplx v = f.values[j];
    if (v == cplx{0.0, 0.0}) continue;
    double tau = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    w.g[j - lo] = tau * v * std::exp(a * f.grid.point(j));
  }
  return w;
}

cplx direct_eval(const WindowedSamples& w, double t) {
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < w.g.size(); ++j) {
    if (w.g[j] == cplx{0.0, 0.0}) continue;
    double ph = -t * (w.x0 + static_cast<double>(j) * w.h);
    acc += w.g[j] * cplx{std::cos(ph), std::sin(ph)};
  }
  return w.h * acc;
}

// chirp phases W^{s} with W = e^{-i dt h}; long double keeps the quadratic
// index arguments accurate after reduction mod 2pi
cplx chirp(long double dth, long double s) {
  long double arg = -dth * s;
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  arg = std::fmod(arg, two_pi);
  return cplx{static_cast<double>(std::cos(arg)), static_cast<double>(std::sin(arg))};
}

// Bluestein evaluation of A_k = sum_j b_j W^{jk}, k = 0..T-1
std::vector<cplx> bluestein(const std::vector<cplx>& b, long double dth, std::size_t T) {
  const std::size_t N = b.size();
  const std::size_t M = next_pow2(N + T - 1);
  std::vector<cplx> u(M, cplx{0.0, 0.0}), v(M, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < N; ++j)
    u[j] = b[j] * chirp(dth, 0.5L * static_cast<long double>(j) * static_cast<long double>(j));
  for (std::size_t m = 0; m < std::max(N, T); ++m) {
    cplx c = chirp(dth, -0.5L * static_cast<long double>(m) * static_cast<long double>(m));
    if (m < T) v[m] = c;
    if (m > 0 && m < N) v[M - m] = c;
  }
  auto& engine = FftEngine::instance();
  engine.transform(u, FFTW_FORWARD);
  engine.transform(v, FFTW_FORWARD);
  for (std::size_t i = 0; i < M; ++i) u[i] *= v[i];
  engine.transform(u, FFTW_BACKWARD);
  std::vector<cplx> out(T);
  const double inv = 1.0 / static_cast<double>(M);
  for (std::size_t k = 0; k < T; ++k)
    out[k] = inv * u[k] * chirp(dth, 0.5L * static_cast<long double>(k) * static_cast<long double>(k));
  return out;
}

}  // namespace

FreqGrid FreqGrid::linspace(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) fail(errc::invalid_arg, "frequency grid: need hi > lo and >= 2 points");
  return FreqGrid{lo, (hi - lo) / static_cast<double>(n - 1), n};
}

std::vector<double> FreqGrid::points() const {
  std::vector<double> p(count);
  for (std::size_t k = 0; k < count; ++k) p[k] = point(k);
  return p;
}

cplx weighted_ft_point(const SampledFunction& f, double a, double t) {
  return direct_eval(weighted_samples(f, a), t);
}

cplx kernel_symbol(const SampledFunction& kernel, cplx z) {
  return weighted_ft_point(kernel, z.imag(), z.real());
}

std::vector<cplx> weighted_ft(const SampledFunction& f, double a, const FreqGrid& t) {
  WindowedSamples w = weighted_samples(f, a);
  if (t.count == 0) return {};
  if (t.count < 24 || w.g.size() < 8) {
    std::vector<cplx> out(t.count);
    for (std::size_t k = 0; k < t.count; ++k) out[k] = direct_eval(w, t.point(k));
    return out;
  }

  // F(t_k) = h e^{-i t_k x0} sum_j (g_j e^{-i t0 j h}) W^{jk},  W = e^{-i dt h}
  const std::size_t N = w.g.size();
  std::vector<cplx> b(N);
  for (std::size_t j = 0; j < N; ++j) {
    double ph = -t.t0 * static_cast<double>(j) * w.h;
    b[j] = w.g[j] * cplx{std::cos(ph), std::sin(ph)};
  }
  std::vector<cplx> out = bluestein(b, static_cast<long double>(t.dt) * w.h, t.count);
  double scale_max = 0.0;
  for (std::size_t k = 0; k < t.count; ++k) {
    double ph = -t.point(k) * w.x0;
    out[k] *= w.h * cplx{std::cos(ph), std::sin(ph)};
    scale_max = std::max(scale_max, std::abs(out[k]));
  }

  // spot-check the fast path against direct quadrature (fixed seed)
  std::mt19937_64 rng(0xA11C0FFEEULL ^ t.count);
  for (int s = 0; s < 6; ++s) {
    std::size_t k = rng() % t.count;
    cplx ref = direct_eval(w, t.point(k));
    if (std::abs(ref - out[k]) > 1e-9 * std::max(1e-300, scale_max))
      fail(errc::internal, "fast transform cross-check failed against direct quadrature");
  }
  return out;
}

std::vector<cplx> linear_convolution_fft(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t n = a.size() + b.size() - 1;
  const std::size_t M = next_pow2(n);
  std::vector<cplx> u(M, cplx{0.0, 0.0}), v(M, cplx{0.0, 0.0});
  std::copy(a.begin(), a.end(), u.begin());
  std::copy(b.begin(), b.end(), v.begin());
  auto& engine = FftEngine::instance();
  engine.transform(u, FFTW_FORWARD);
  engine.transform(v, FFTW_FORWARD);
  for (std::size_t i = 0; i < M; ++i) u[i] *= v[i];
  engine.transform(u, FFTW_BACKWARD);
  u.resize(n);
  const double inv = 1.0 / static_cast<double>(M);
  for (auto& x : u) x *= inv;
  return u;
}

}  // namespace ak
