// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "sampled_function.hpp"
#include "shift_analysis.hpp"

namespace ak {

// Convolution kernel: a sampled function with mandatory compact support.
struct Kernel {
  SampledFunction phi;
  Kernel() = default;
  explicit Kernel(SampledFunction f);
};

enum class ConvPath { automatic, direct, fast };

SampledFunction apply_convolution(const Kernel& k, const SampledFunction& f,
                                  ConvPath path = ConvPath::automatic);
Kernel convolve_kernels(const Kernel& a, const Kernel& b);
// phi_n = psi * j_n with j_n a unit-mass bump of width 1/n
Kernel mollifier_sequence(const Kernel& psi, int n);

SampledFunction resolvent_neumann(const Weight& w, cplx alpha, const SampledFunction& f,
                                  double tail_tol, const Annulus* annulus_hint = nullptr);

// Bounded operator on the sampled weighted space. Value type over an
// immutable implementation; all applications are pure.
class Multiplier {
public:
  enum class Kind { convolution, resolvent, composition, coordinate_diagnostic };

  static Multiplier convolution(Kernel k);
  // fixed-length truncation of the Neumann series, so the operator is a
  // finite combination of shifts and commutes with translations exactly
  static Multiplier resolvent(const Weight& w, cplx alpha, double tail_tol,
                              const Annulus* annulus_hint = nullptr);
  static Multiplier composition(std::vector<Multiplier> parts);
  // multiplication by x: deliberately NOT translation invariant (diagnostic)
  static Multiplier coordinate_diagnostic();

  Kind kind() const;
  SampledFunction apply(const SampledFunction& f) const;
  // support growth (physical units) of a single application
  double support_growth() const;

  struct ConjContext {
    const Grid* grid = nullptr;
    // log w(x_j) + 0.5 log tau_j: the conjugation exponent of D^{1/2} M D^{-1/2}
    std::vector<double> lambda;
  };
  // omega-conjugated action used by the norm estimator; in/out are raw
  // sample arrays of grid size
  void conj_apply(const std::vector<cplx>& in, std::vector<cplx>& out, const ConjContext& ctx,
                  bool adjoint) const;

  struct Impl;

private:
  explicit Multiplier(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct NormEstimate {
  double value = 0.0;
  double relative_tol = 0.0;  // achieved Ritz-value change at the last step
  int iterations = 0;
  double window_half_width = 0.0;
  bool converged = false;
};

// ||M|| on the window subspace {supp f in [-W, W]} of L^2_w, via a Krylov
// iteration on M*M with the weighted adjoint. Nondecreasing in W.
NormEstimate operator_norm(const Multiplier& m, const Weight& w, const Grid& grid,
                           double rel_tol = 1e-11, double window_half_width = 128.0,
                           int max_iterations = 300);

double commutation_residual(const Multiplier& m, double t,
                            const std::vector<SampledFunction>& probes, const Weight& w);

std::vector<SampledFunction> standard_probes(const Grid& g);

}  // namespace ak
